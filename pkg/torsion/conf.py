from django.conf import settings


def _setting(name: str, default):
    return getattr(settings, name, default)


def delta_min() -> float:
    return float(_setting("LENS_DELTA_MIN", 1e-6))


def rank_tol() -> float:
    return float(_setting("LENS_RANK_TOL", 1e-9))


def residual_tol() -> float:
    return float(_setting("LENS_RESIDUAL_TOL", 1e-8))


def block_tol() -> float:
    return float(_setting("LENS_BLOCK_TOL", 1e-9))


def compare_tol() -> float:
    return float(_setting("LENS_COMPARE_TOL", 1e-6))


def relative_floor() -> float:
    return float(_setting("LENS_RELATIVE_FLOOR", 1e-12))
