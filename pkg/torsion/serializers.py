from math import gcd, isfinite

from rest_framework import serializers

from .combinatorics import LensSpec
from .geometry import GeomParams

OUTPUT_FORMATS = ("json", "csv")


class IndexListField(serializers.Field):
    """A list of non-negative integers, or the literal "all" (returned as None)."""

    default_error_messages = {"invalid": 'Expected a list of integers or "all".'}

    def to_internal_value(self, data):
        if data in (None, "all", ["all"]):
            return None
        if isinstance(data, str):
            data = [part for part in data.split(",") if part.strip()]
        if not isinstance(data, (list, tuple)):
            self.fail("invalid")
        try:
            values = [int(x) for x in data]
        except (TypeError, ValueError):
            self.fail("invalid")
        if any(v < 0 for v in values):
            self.fail("invalid")
        return sorted(set(values))

    def to_representation(self, value):
        return "all" if value is None else list(value)


def reject_non_finite(attrs, names):
    for name in names:
        value = attrs.get(name)
        if value is not None and not isfinite(value):
            raise serializers.ValidationError({name: f"{name} must be a finite number, got {value}"})


class LensSerializer(serializers.Serializer):
    p = serializers.IntegerField()
    q = serializers.IntegerField()

    def validate_p(self, value):
        if value < 3:
            raise serializers.ValidationError("p must be ≥ 3")
        return value

    def validate(self, attrs):
        p, q = attrs["p"], attrs["q"]
        if not 1 <= q < p:
            raise serializers.ValidationError({"q": f"q must satisfy 1 ≤ q < p, got q={q}"})
        if gcd(p, q) != 1:
            raise serializers.ValidationError({"q": f"p={p} and q={q} are not coprime"})
        attrs["spec"] = LensSpec(p, q)
        return attrs


class RunConfigSerializer(LensSerializer):
    k = IndexListField(required=False, default=None)
    j = IndexListField(required=False, default=None)
    seed = serializers.IntegerField(min_value=0, required=False, allow_null=True, default=None)
    alpha = serializers.FloatField(required=False, allow_null=True, default=None)
    rho = serializers.FloatField(required=False, allow_null=True, default=None)
    sigma = serializers.FloatField(required=False, allow_null=True, default=None)
    s = serializers.FloatField(required=False, allow_null=True, default=None)
    residual_tol = serializers.FloatField(min_value=0, required=False, allow_null=True, default=None)
    compare_tol = serializers.FloatField(min_value=0, required=False, allow_null=True, default=None)
    format = serializers.ChoiceField(choices=OUTPUT_FORMATS, default="json")

    def validate(self, attrs):
        attrs = super().validate(attrs)
        p = attrs["p"]
        reject_non_finite(attrs, ("alpha", "rho", "sigma", "s", "residual_tol", "compare_tol"))
        geometric = {name: attrs.get(name) for name in ("alpha", "rho", "sigma", "s")}
        given = [name for name, value in geometric.items() if value is not None]
        if given and attrs.get("seed") is not None:
            raise serializers.ValidationError("give either explicit parameters or a seed, not both")
        if given and len(given) != 4:
            missing = sorted(set(geometric) - set(given))
            raise serializers.ValidationError(f"explicit parameters need alpha, rho, sigma and s; missing {missing}")
        for name in ("rho", "sigma", "s"):
            if geometric[name] is not None and geometric[name] <= 0:
                raise serializers.ValidationError({name: f"{name} must be positive"})

        if attrs["k"] is not None and any(not 1 <= k <= p - 1 for k in attrs["k"]):
            raise serializers.ValidationError({"k": f"every k must satisfy 1 ≤ k ≤ {p - 1}"})
        if attrs["j"] is not None and any(j >= p for j in attrs["j"]):
            raise serializers.ValidationError({"j": f"every j must satisfy 0 ≤ j ≤ {p - 1}"})

        attrs["params"] = GeomParams(k=1, **geometric) if given else None
        if attrs["params"] is None and attrs.get("seed") is None:
            attrs["seed"] = 0
        return attrs


class VerifySerializer(serializers.Serializer):
    p_max = serializers.IntegerField()
    p_min = serializers.IntegerField(default=3)
    tol = serializers.FloatField(min_value=0, required=False, allow_null=True, default=None)
    seed = serializers.IntegerField(min_value=0, default=0)

    def validate(self, attrs):
        reject_non_finite(attrs, ("tol",))
        if attrs["p_min"] < 3:
            raise serializers.ValidationError({"p_min": "p must be ≥ 3"})
        if attrs["p_max"] < attrs["p_min"]:
            raise serializers.ValidationError({"p_max": f"p_max must be ≥ {attrs['p_min']}"})
        return attrs


class OracleValueSerializer(serializers.Serializer):
    j = serializers.IntegerField()
    k = serializers.IntegerField()
    value = serializers.FloatField()
    branch = serializers.CharField(source="formula_branch")
