"""
ASGI entry point for the res_atlas project.

Exposes ``application`` for ASGI servers serving the atlas API.
"""

import os

from django.core.asgi import get_asgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "res_atlas.settings")

application = get_asgi_application()
