from django.db import models
from django.utils import timezone


class BenchRecord(models.Model):
    """
    One file of a benchmark run, as written to the results CSV.
    """

    VERDICT_CHOICES = [
        ("sat", "sat"),
        ("unsat", "unsat"),
        ("unknown", "unknown"),
        ("error", "error"),
    ]

    run_label = models.CharField(max_length=100)
    file = models.CharField(max_length=255)
    verdict = models.CharField(max_length=10, choices=VERDICT_CHOICES)
    steps = models.PositiveIntegerField(default=0)
    decisions = models.PositiveIntegerField(default=0)
    conflicts = models.PositiveIntegerField(default=0)
    proof_checked = models.BooleanField(default=False)
    wall_millis = models.PositiveIntegerField(default=0)
    created_at = models.DateTimeField(default=timezone.now)

    def __str__(self):
        return f"{self.run_label}/{self.file} - {self.verdict}"

    class Meta:
        ordering = ["run_label", "file"]
