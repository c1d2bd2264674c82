import logging
from math import gcd
from typing import Dict, List, Optional

from celery import group, shared_task

from . import oracle
from .combinatorics import LensSpec
from .engine import compute_all
from .exceptions import TorsionError

logger = logging.getLogger(__name__)


def lens_spaces(p_min: int, p_max: int) -> List[tuple]:
    return [(p, q) for p in range(p_min, p_max + 1) for q in range(1, p) if gcd(p, q) == 1]


@shared_task
def verify_lens_space(p: int, q: int, seed: int = 0, tol: Optional[float] = None) -> Dict[str, object]:
    """Compute every cell of L(p, q) and compare it with the closed forms."""
    # looked up per call so a replaced Δ reaches both the cells and the verdict
    delta_fn = oracle.delta
    try:
        report = compute_all(LensSpec(p, q), seed=seed, delta_fn=delta_fn)
    except TorsionError as exc:
        logger.error("L(%s,%s) could not be computed: %s", p, q, exc)
        return {"p": p, "q": q, "passed": False, "cells": 0, "worst_rel_err": None, "error": str(exc)}
    verdict = oracle.compare(report, tol=tol, delta_fn=delta_fn)
    summary = verdict.summary()
    summary["error"] = None
    logger.info("Verified L(%s,%s): %s cells, worst %.3e", p, q, summary["cells"], verdict.worst)
    return summary


def run_sweep(p_min: int, p_max: int, seed: int = 0, tol: Optional[float] = None) -> List[Dict[str, object]]:
    """One task per lens space; results come back in (p, q) order."""
    spaces = lens_spaces(p_min, p_max)
    if not spaces:
        return []
    workflow = group(verify_lens_space.s(p, q, seed, tol) for p, q in spaces)
    result = workflow.apply_async()
    summaries = [child.get() for child in result.results]
    return sorted(summaries, key=lambda s: (s["p"], s["q"]))
