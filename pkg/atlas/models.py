from django.contrib.auth.models import User
from django.db import models
from django.utils import timezone


class VerificationRun(models.Model):
    """One execution of a verification suite, queued or finished"""

    SUITE_CHOICES = [
        ("plancherel", "Plancherel density"),
        ("symmetry", "Symmetries"),
        ("deformation", "Contour deformation"),
        ("residues", "Chart residues"),
        ("cancellation", "Cancellation"),
        ("enumeration", "Resonance enumeration"),
        ("monodromy", "Monodromy"),
    ]

    STATUS_CHOICES = [
        ("pending", "Pending"),
        ("running", "Running"),
        ("passed", "Passed"),
        ("failed", "Failed"),
        ("error", "Error"),
    ]

    suite = models.CharField(max_length=20, choices=SUITE_CHOICES)
    space_selector = models.CharField(
        max_length=20,
        blank=True,
        help_text="Catalog selector such as DIII or CII:2; empty runs the suite's default spaces",
    )
    seed = models.IntegerField(default=0, help_text="Seed for randomized samples")
    status = models.CharField(max_length=10, choices=STATUS_CHOICES, default="pending")
    max_error = models.FloatField(
        null=True, blank=True, help_text="Largest error over the suite's checks"
    )
    report = models.JSONField(default=dict, blank=True)
    error_message = models.TextField(blank=True)
    requested_by = models.ForeignKey(
        User,
        on_delete=models.SET_NULL,
        null=True,
        blank=True,
        related_name="verification_runs",
    )

    # Metadata
    celery_task_id = models.CharField(max_length=255, blank=True)
    created_at = models.DateTimeField(auto_now_add=True)
    started_at = models.DateTimeField(null=True, blank=True)
    finished_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        ordering = ["-created_at"]
        verbose_name = "Verification Run"
        verbose_name_plural = "Verification Runs"
        indexes = [
            models.Index(fields=["suite"], name="atlas_run_suite_idx"),
            models.Index(fields=["status"], name="atlas_run_status_idx"),
        ]

    def __str__(self):
        target = self.space_selector or "default spaces"
        return f"{self.suite} on {target} ({self.status})"

    @property
    def duration(self):
        if self.started_at and self.finished_at:
            return self.finished_at - self.started_at
        return None

    def mark_running(self, task_id=""):
        self.status = "running"
        self.started_at = timezone.now()
        if task_id:
            self.celery_task_id = task_id
        self.save(update_fields=["status", "started_at", "celery_task_id"])

    def mark_finished(self, report):
        """Store a SuiteReport and set the status from its verdict"""
        self.report = report.as_dict()
        self.max_error = report.max_error
        self.status = "passed" if report.passed else "failed"
        self.finished_at = timezone.now()
        self.save(update_fields=["report", "max_error", "status", "finished_at"])

    def mark_error(self, message):
        self.status = "error"
        self.error_message = str(message)
        self.finished_at = timezone.now()
        self.save(update_fields=["status", "error_message", "finished_at"])


class ResonanceTable(models.Model):
    """Stored resonance table of one space up to an exact radius bound"""

    space_selector = models.CharField(max_length=20)
    b = models.FloatField(default=1.0, help_text="Scale of the metric")
    max_radius_sq = models.CharField(
        max_length=50, help_text="Exact bound on |z|^2/b^2 as a num/den string"
    )
    rows = models.JSONField(default=list, blank=True)
    row_count = models.PositiveIntegerField(default=0)

    # Metadata
    celery_task_id = models.CharField(max_length=255, blank=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at"]
        verbose_name = "Resonance Table"
        verbose_name_plural = "Resonance Tables"
        indexes = [models.Index(fields=["space_selector"], name="atlas_table_space_idx")]

    def __str__(self):
        return f"{self.space_selector} up to {self.max_radius_sq} ({self.row_count} rows)"

    @classmethod
    def create_from_rows(cls, space, max_radius_sq, rows, task_id=""):
        return cls.objects.create(
            space_selector=space.label,
            b=space.b,
            max_radius_sq=max_radius_sq,
            rows=rows,
            row_count=len(rows),
            celery_task_id=task_id,
        )
