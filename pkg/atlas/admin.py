from django.contrib import admin
from .models import VerificationRun, ResonanceTable


@admin.register(VerificationRun)
class VerificationRunAdmin(admin.ModelAdmin):
    list_display = (
        "suite",
        "space_selector",
        "seed",
        "status",
        "max_error",
        "requested_by",
        "created_at",
        "finished_at",
    )
    list_filter = ("status", "suite", "space_selector", "created_at")
    search_fields = ("suite", "space_selector", "celery_task_id", "error_message")
    readonly_fields = ("created_at", "started_at", "finished_at", "celery_task_id")
    date_hierarchy = "created_at"
    fieldsets = (
        ("Run", {"fields": ("suite", "space_selector", "seed", "requested_by")}),
        ("Outcome", {"fields": ("status", "max_error", "error_message")}),
        ("Report", {"fields": ("report",), "classes": ("collapse",)}),
        (
            "Metadata",
            {
                "fields": ("celery_task_id", "created_at", "started_at", "finished_at"),
                "classes": ("collapse",),
            },
        ),
    )


@admin.register(ResonanceTable)
class ResonanceTableAdmin(admin.ModelAdmin):
    list_display = ("space_selector", "b", "max_radius_sq", "row_count", "created_at")
    list_filter = ("space_selector", "created_at")
    search_fields = ("space_selector", "max_radius_sq")
    readonly_fields = ("row_count", "created_at", "celery_task_id")
    fieldsets = (
        ("Table", {"fields": ("space_selector", "b", "max_radius_sq", "row_count")}),
        ("Rows", {"fields": ("rows",), "classes": ("collapse",)}),
        (
            "Metadata",
            {"fields": ("celery_task_id", "created_at"), "classes": ("collapse",)},
        ),
    )
