from django.db import models
import uuid


class CertificationRun(models.Model):
    run_id = models.UUIDField(default=uuid.uuid4, unique=True)
    command = models.CharField(max_length=32)
    parameters = models.JSONField(default=dict)
    method = models.CharField(max_length=32, blank=True)
    lo_dyadic = models.TextField(blank=True)
    hi_dyadic = models.TextField(blank=True)
    lo_decimal = models.CharField(max_length=64, blank=True)
    hi_decimal = models.CharField(max_length=64, blank=True)
    conditional_on = models.CharField(max_length=200, blank=True, help_text="Comma-separated assumptions")
    exit_code = models.IntegerField(default=0)
    report = models.TextField(blank=True)
    started_at = models.DateTimeField(auto_now_add=True)
    duration_seconds = models.FloatField(null=True, blank=True)

    class Meta:
        ordering = ['-started_at']

    def __str__(self):
        return f"{self.command} {str(self.run_id)[:8]} (exit {self.exit_code})"

    @property
    def assumptions(self):
        return [a for a in self.conditional_on.split(',') if a]


class RunTerm(models.Model):
    """One body row of an upper-sequence report"""
    run = models.ForeignKey(CertificationRun, on_delete=models.CASCADE, related_name='terms')
    position = models.IntegerField()
    columns = models.JSONField(default=dict)
    hi_dyadic = models.TextField()

    class Meta:
        ordering = ['position']

    def __str__(self):
        return f"term {self.position} of {str(self.run.run_id)[:8]}"
