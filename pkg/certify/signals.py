from django.db.models.signals import post_save, post_delete
from django.dispatch import receiver
from .models import CertificationRun
import logging

logger = logging.getLogger(__name__)


@receiver(post_save, sender=CertificationRun)
def log_run_recorded(sender, instance, created, **kwargs):
    """Log when a run is recorded"""
    if created:
        logger.info(f"Run recorded: {instance.command} {instance.run_id} (exit {instance.exit_code})")


@receiver(post_delete, sender=CertificationRun)
def log_run_deleted(sender, instance, **kwargs):
    """Log when a run is deleted"""
    logger.info(f"Run deleted: {instance.run_id}")
