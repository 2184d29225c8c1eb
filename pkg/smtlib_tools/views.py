import logging

from rest_framework import permissions, serializers, status, viewsets
from rest_framework.decorators import api_view
from rest_framework.response import Response

from core.kernel import Config, ProofMode

from .driver import PROOF_FORMATS, model_text, proof_text, solve_script
from .exceptions import ParseError
from .models import SolveHistory
from .parser import parse

logger = logging.getLogger(__name__)


class SolveRequestSerializer(serializers.Serializer):
    script = serializers.CharField(trim_whitespace=False)
    name = serializers.CharField(required=False, allow_blank=True, max_length=200)
    proof_mode = serializers.ChoiceField(choices=[m.value for m in ProofMode], required=False)
    proof_format = serializers.ChoiceField(choices=PROOF_FORMATS, default="cdsat")
    max_steps = serializers.IntegerField(required=False, min_value=1)


class SolveHistorySerializer(serializers.ModelSerializer):
    class Meta:
        model = SolveHistory
        fields = [
            "id",
            "name",
            "verdict",
            "proof_mode",
            "steps",
            "decisions",
            "conflicts",
            "proof_checked",
            "wall_millis",
            "executed_at",
        ]
        read_only_fields = fields


class SolveHistoryViewSet(viewsets.ReadOnlyModelViewSet):
    queryset = SolveHistory.objects.all()
    serializer_class = SolveHistorySerializer
    permission_classes = [permissions.IsAuthenticated]


@api_view(["POST"])
def solve(request):
    """
    API endpoint that solves a script and records the run
    """
    request_data = SolveRequestSerializer(data=request.data)
    request_data.is_valid(raise_exception=True)
    data = request_data.validated_data

    try:
        script = parse(data["script"])
    except ParseError as exc:
        return Response(
            {"error": exc.message, "line": exc.line, "col": exc.col},
            status=status.HTTP_400_BAD_REQUEST,
        )

    config = Config.from_settings(proof_mode=data.get("proof_mode"), max_steps=data.get("max_steps"))
    outcome = solve_script(script, config)
    SolveHistory.objects.create(
        name=data.get("name", ""),
        script=data["script"],
        verdict=outcome.name,
        proof_mode=config.proof_mode.value,
        steps=outcome.stats.steps,
        decisions=outcome.stats.decisions,
        conflicts=outcome.stats.conflicts,
        proof_checked=outcome.proof_checked,
        wall_millis=outcome.wall_millis,
    )
    return Response(
        {
            "verdict": outcome.name,
            "model": model_text(outcome),
            "proof": proof_text(outcome, script.problem, data["proof_format"]),
            "proof_checked": outcome.proof_checked,
            "stats": {
                "steps": outcome.stats.steps,
                "decisions": outcome.stats.decisions,
                "conflicts": outcome.stats.conflicts,
                "wall_millis": outcome.wall_millis,
            },
        }
    )
