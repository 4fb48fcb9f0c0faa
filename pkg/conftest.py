import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'hopfaction_system.settings')
django.setup()
