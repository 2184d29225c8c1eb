from rest_framework import permissions, serializers, viewsets

from .models import BenchRecord


class BenchRecordSerializer(serializers.ModelSerializer):
    class Meta:
        model = BenchRecord
        fields = [
            "id",
            "run_label",
            "file",
            "verdict",
            "steps",
            "decisions",
            "conflicts",
            "proof_checked",
            "wall_millis",
            "created_at",
        ]
        read_only_fields = fields


class BenchRecordViewSet(viewsets.ReadOnlyModelViewSet):
    """
    Recorded benchmark rows, filterable with ``?run=<label>``.
    """

    serializer_class = BenchRecordSerializer
    permission_classes = [permissions.IsAuthenticated]

    def get_queryset(self):
        queryset = BenchRecord.objects.all()
        label = self.request.query_params.get("run")
        if label:
            queryset = queryset.filter(run_label=label)
        return queryset
