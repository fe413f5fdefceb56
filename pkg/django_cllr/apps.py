from django.apps import AppConfig


class DjangoCllrConfig(AppConfig):
    """
    Django app configuration for django-cllr.

    Provides the cllr_* analysis commands and the AnalysisRun history
    for Django projects.
    """
    name = "django_cllr"
    verbose_name = "CLL_R Analyses"
    default_auto_field = "django.db.models.BigAutoField"
