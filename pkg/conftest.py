import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "lens_torsion_main.settings")
django.setup()
