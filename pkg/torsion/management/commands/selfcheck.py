from dataclasses import replace

from django.core.management.base import BaseCommand, CommandError

from torsion.engine import compute_all, default_ks, diagnose
from torsion.exceptions import DegenerateK, TorsionError
from torsion.geometry import random_params
from torsion.oracle import compare
from torsion.serializers import RunConfigSerializer

from ._options import add_run_arguments, run_data, translate, validated

SCALAR_CHECKS = (
    "max_defect", "AB", "BC", "A_symmetry", "off_block", "hermitian",
    "volume_formula", "schlafli", "pivot_spread",
)


class Command(BaseCommand):
    help = "Print every structural residual of the complex and the oracle comparison; fail if any exceeds tolerance."

    def add_arguments(self, parser):
        add_run_arguments(parser)

    def handle(self, *args, **options):
        cfg = validated(RunConfigSerializer, run_data(options))
        spec = cfg["spec"]
        ks = [k for k in (cfg["k"] or default_ks(spec.p)) if k <= spec.p - 1]

        passed = True
        try:
            for k in ks:
                params = replace(cfg["params"], k=k) if cfg["params"] else random_params(spec, k, cfg["seed"])
                try:
                    checks = diagnose(spec, params, cfg["residual_tol"])
                except DegenerateK:
                    self.stdout.write(f"{spec} k={k}: skipped, gcd(k, p) > 1")
                    continue
                passed &= checks["passed"]
                self._print_checks(spec, k, checks)
            report = compute_all(
                spec, params=cfg["params"], seed=cfg["seed"], ks=ks, js=cfg["j"], residual_tol=cfg["residual_tol"]
            )
        except TorsionError as exc:
            raise translate(exc) from exc

        verdict = compare(report, tol=cfg["compare_tol"])
        for cell in verdict.cells:
            self.stdout.write(
                f"  j={cell.j} k={cell.k}: I={cell.invariant:.12g} closed form={cell.expected:.12g} "
                f"rel_err={cell.rel_err:.3e}"
            )
        self.stdout.write(f"{spec}: worst relative error {verdict.worst:.3e}")
        if not (passed and verdict.passed):
            raise CommandError(f"self-check failed for {spec}", returncode=1)
        self.stdout.write(self.style.SUCCESS(f"{spec}: all residuals within tolerance"))

    def _print_checks(self, spec, k, checks):
        self.stdout.write(f"{spec} k={k}")
        for name in SCALAR_CHECKS:
            self.stdout.write(f"  {name:<15} {float(checks[name]):.3e}")
        self.stdout.write(f"  ranks           {checks['ranks']} expected {checks['expected_ranks']}")
        for row in checks["blocks"]:
            self.stdout.write(
                f"  block j={row['j']}: ranks {row['ranks']} expected {row['expected']}, "
                f"{row['selections']} pivot selections, spread {row['spread']:.3e}"
            )
