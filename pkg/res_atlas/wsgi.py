"""
WSGI entry point for the res_atlas project.

Exposes ``application`` for WSGI servers serving the atlas API.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "res_atlas.settings")

application = get_wsgi_application()
