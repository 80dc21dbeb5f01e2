import os
from celery import Celery

# Set the default Django settings module for the 'celery' program.
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "res_atlas.settings")

app = Celery("res_atlas")

# All Celery configuration lives in Django settings under the CELERY_ prefix.
app.config_from_object("django.conf:settings", namespace="CELERY")

# Picks up atlas.tasks.
app.autodiscover_tasks()
