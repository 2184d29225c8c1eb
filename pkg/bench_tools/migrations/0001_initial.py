from django.db import migrations, models
import django.utils.timezone


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="BenchRecord",
            fields=[
                ("id", models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name="ID")),
                ("run_label", models.CharField(max_length=100)),
                ("file", models.CharField(max_length=255)),
                ("verdict", models.CharField(choices=[("sat", "sat"), ("unsat", "unsat"), ("unknown", "unknown"), ("error", "error")], max_length=10)),
                ("steps", models.PositiveIntegerField(default=0)),
                ("decisions", models.PositiveIntegerField(default=0)),
                ("conflicts", models.PositiveIntegerField(default=0)),
                ("proof_checked", models.BooleanField(default=False)),
                ("wall_millis", models.PositiveIntegerField(default=0)),
                ("created_at", models.DateTimeField(default=django.utils.timezone.now)),
            ],
            options={
                "ordering": ["run_label", "file"],
            },
        ),
    ]
