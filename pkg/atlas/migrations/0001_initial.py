# Generated by Django 5.2.3 on 2026-10-18 12:00

import django.db.models.deletion
from django.conf import settings
from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = [
        migrations.swappable_dependency(settings.AUTH_USER_MODEL),
    ]

    operations = [
        migrations.CreateModel(
            name="ResonanceTable",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("space_selector", models.CharField(max_length=20)),
                (
                    "b",
                    models.FloatField(default=1.0, help_text="Scale of the metric"),
                ),
                (
                    "max_radius_sq",
                    models.CharField(
                        help_text="Exact bound on |z|^2/b^2 as a num/den string",
                        max_length=50,
                    ),
                ),
                ("rows", models.JSONField(blank=True, default=list)),
                ("row_count", models.PositiveIntegerField(default=0)),
                ("celery_task_id", models.CharField(blank=True, max_length=255)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "verbose_name": "Resonance Table",
                "verbose_name_plural": "Resonance Tables",
                "ordering": ["-created_at"],
                "indexes": [
                    models.Index(
                        fields=["space_selector"], name="atlas_table_space_idx"
                    )
                ],
            },
        ),
        migrations.CreateModel(
            name="VerificationRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "suite",
                    models.CharField(
                        choices=[
                            ("plancherel", "Plancherel density"),
                            ("symmetry", "Symmetries"),
                            ("deformation", "Contour deformation"),
                            ("residues", "Chart residues"),
                            ("cancellation", "Cancellation"),
                            ("enumeration", "Resonance enumeration"),
                            ("monodromy", "Monodromy"),
                        ],
                        max_length=20,
                    ),
                ),
                (
                    "space_selector",
                    models.CharField(
                        blank=True,
                        help_text="Catalog selector such as DIII or CII:2; empty runs the suite's default spaces",
                        max_length=20,
                    ),
                ),
                (
                    "seed",
                    models.IntegerField(
                        default=0, help_text="Seed for randomized samples"
                    ),
                ),
                (
                    "status",
                    models.CharField(
                        choices=[
                            ("pending", "Pending"),
                            ("running", "Running"),
                            ("passed", "Passed"),
                            ("failed", "Failed"),
                            ("error", "Error"),
                        ],
                        default="pending",
                        max_length=10,
                    ),
                ),
                (
                    "max_error",
                    models.FloatField(
                        blank=True,
                        help_text="Largest error over the suite's checks",
                        null=True,
                    ),
                ),
                ("report", models.JSONField(blank=True, default=dict)),
                ("error_message", models.TextField(blank=True)),
                ("celery_task_id", models.CharField(blank=True, max_length=255)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                ("started_at", models.DateTimeField(blank=True, null=True)),
                ("finished_at", models.DateTimeField(blank=True, null=True)),
                (
                    "requested_by",
                    models.ForeignKey(
                        blank=True,
                        null=True,
                        on_delete=django.db.models.deletion.SET_NULL,
                        related_name="verification_runs",
                        to=settings.AUTH_USER_MODEL,
                    ),
                ),
            ],
            options={
                "verbose_name": "Verification Run",
                "verbose_name_plural": "Verification Runs",
                "ordering": ["-created_at"],
                "indexes": [
                    models.Index(fields=["suite"], name="atlas_run_suite_idx"),
                    models.Index(fields=["status"], name="atlas_run_status_idx"),
                ],
            },
        ),
    ]
