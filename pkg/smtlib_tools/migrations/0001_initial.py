from django.db import migrations, models
import django.utils.timezone


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="SolveHistory",
            fields=[
                ("id", models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name="ID")),
                ("name", models.CharField(blank=True, max_length=200)),
                ("script", models.TextField()),
                ("verdict", models.CharField(choices=[("sat", "sat"), ("unsat", "unsat"), ("unknown", "unknown")], max_length=10)),
                ("proof_mode", models.CharField(default="proof-terms", max_length=20)),
                ("steps", models.PositiveIntegerField(default=0)),
                ("decisions", models.PositiveIntegerField(default=0)),
                ("conflicts", models.PositiveIntegerField(default=0)),
                ("proof_checked", models.BooleanField(default=False)),
                ("wall_millis", models.PositiveIntegerField(default=0)),
                ("executed_at", models.DateTimeField(default=django.utils.timezone.now)),
            ],
            options={
                "verbose_name_plural": "Solve histories",
                "ordering": ["-executed_at"],
            },
        ),
    ]
