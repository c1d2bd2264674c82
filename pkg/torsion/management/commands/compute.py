from django.core.management.base import BaseCommand

from torsion.engine import compute_all
from torsion.exceptions import TorsionError
from torsion.oracle import compare
from torsion.payloads import render
from torsion.serializers import RunConfigSerializer

from ._options import add_run_arguments, emit, run_data, translate, validated


class Command(BaseCommand):
    help = "Compute the invariants I_{j,1}(L(p, q)) for the requested cells and emit them as JSON or CSV."

    def add_arguments(self, parser):
        add_run_arguments(parser)
        parser.add_argument(
            "--multiset", action="store_true", help="emit the sorted values over k for each j as JSON instead of cells"
        )

    def handle(self, *args, **options):
        cfg = validated(RunConfigSerializer, run_data(options))
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
            raise translate(exc) from exc

        emit(self, render(report, cfg["format"], multiset=options["multiset"]), options.get("output"))
        verdict = compare(report, tol=cfg["compare_tol"])
        if not verdict.passed:
            self.stderr.write(self.style.WARNING(
                f"{len(verdict.failed)} failed cells, worst relative error {verdict.worst:.3e}"
            ))
