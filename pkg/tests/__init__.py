# Test package for django-managed-commands
