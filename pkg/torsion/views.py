from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView

from .engine import compute_all
from .exceptions import TorsionError
from .oracle import oracle_table
from .payloads import report_payload
from .serializers import LensSerializer, OracleValueSerializer, RunConfigSerializer


class ComputeView(APIView):
    def post(self, request):
        serializer = RunConfigSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        cfg = serializer.validated_data

        try:
            report = compute_all(
                cfg["spec"],
                params=cfg["params"],
                seed=cfg["seed"],
                ks=cfg["k"],
                js=cfg["j"],
                residual_tol=cfg["residual_tol"],
            )
        except TorsionError as exc:
            return Response(
                {"detail": str(exc), "error": type(exc).__name__},
                status=status.HTTP_422_UNPROCESSABLE_ENTITY,
            )
        return Response(report_payload(report), status=status.HTTP_200_OK)


class OracleView(APIView):
    def get(self, request, p: int, q: int):
        serializer = LensSerializer(data={"p": p, "q": q})
        serializer.is_valid(raise_exception=True)
        values = oracle_table(p, q)
        return Response({"p": p, "q": q, "values": OracleValueSerializer(values, many=True).data})
