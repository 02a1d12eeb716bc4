from django.apps import AppConfig


class CertifyConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'certify'
    verbose_name = 'Certified Pressure'

    def ready(self):
        """Connect the ledger signals"""
        import certify.signals  # noqa: F401
