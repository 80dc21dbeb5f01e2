"""
URL configuration for res_atlas.

The atlas HTTP surface is a django-ninja API mounted under ``api/``; the
Django admin exposes stored verification runs and resonance tables.
"""

from django.contrib import admin
from django.urls import path
from atlas.api import api

urlpatterns = [
    path("admin/", admin.site.urls),
    path("api/", api.urls),
]
