from django.core.management.base import BaseCommand, CommandError

from torsion.serializers import VerifySerializer
from torsion.tasks import run_sweep

from ._options import validated


class Command(BaseCommand):
    help = "Check every lens space with 3 ≤ p ≤ p_max against the closed forms."

    def add_arguments(self, parser):
        parser.add_argument("--p-max", type=int, required=True)
        parser.add_argument("--p-min", type=int, default=3)
        parser.add_argument("--tol", type=float)
        parser.add_argument("--seed", type=int, default=0)

    def handle(self, *args, **options):
        data = {"p_max": options["p_max"], "p_min": options["p_min"], "seed": options["seed"]}
        if options.get("tol") is not None:
            data["tol"] = options["tol"]
        cfg = validated(VerifySerializer, data)

        summaries = run_sweep(cfg["p_min"], cfg["p_max"], seed=cfg["seed"], tol=cfg["tol"])
        worst = 0.0
        failures = []
        for summary in summaries:
            label = f"L({summary['p']},{summary['q']})"
            if summary["error"]:
                failures.append(label)
                self.stdout.write(f"{label}: error {summary['error']}")
                continue
            worst = max(worst, summary["worst_rel_err"])
            line = f"{label}: {summary['cells']} cells, worst relative error {summary['worst_rel_err']:.3e}"
            if summary["degenerate"]:
                line += f", {len(summary['degenerate'])} degenerate"
            if not summary["passed"]:
                failures.append(label)
                line += " FAIL"
            self.stdout.write(line)

        self.stdout.write(f"{len(summaries)} lens spaces, worst relative error {worst:.3e}")
        if failures:
            raise CommandError(f"verification failed for {', '.join(failures)}", returncode=1)
        self.stdout.write(self.style.SUCCESS("All invariants match the closed forms."))
