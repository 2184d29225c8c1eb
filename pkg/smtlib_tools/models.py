from django.db import models
from django.utils import timezone


class SolveHistory(models.Model):
    """
    Model representing one solver run submitted through the API.
    """

    VERDICT_CHOICES = [
        ("sat", "sat"),
        ("unsat", "unsat"),
        ("unknown", "unknown"),
    ]

    name = models.CharField(max_length=200, blank=True)
    script = models.TextField()
    verdict = models.CharField(max_length=10, choices=VERDICT_CHOICES)
    proof_mode = models.CharField(max_length=20, default="proof-terms")
    steps = models.PositiveIntegerField(default=0)
    decisions = models.PositiveIntegerField(default=0)
    conflicts = models.PositiveIntegerField(default=0)
    proof_checked = models.BooleanField(default=False)
    wall_millis = models.PositiveIntegerField(default=0)
    executed_at = models.DateTimeField(default=timezone.now)

    def __str__(self):
        """
        Returns a string representation of the run.
        """
        return f"{self.name or 'script'} - {self.verdict}"

    class Meta:
        ordering = ["-executed_at"]
        verbose_name_plural = "Solve histories"
