import json

import pandas as pd
from django.core.management.base import BaseCommand

from torsion.exceptions import TorsionError
from torsion.oracle import oracle_table
from torsion.serializers import LensSerializer, OracleValueSerializer

from ._options import add_lens_arguments, emit, translate, validated


class Command(BaseCommand):
    help = "Print the closed-form invariants of L(p, q) for every j and k."

    def add_arguments(self, parser):
        add_lens_arguments(parser)
        parser.add_argument("--format", choices=("table", "json", "csv"), default="table")
        parser.add_argument("--output")

    def handle(self, *args, **options):
        cfg = validated(LensSerializer, {"p": options["p"], "q": options["q"]})
        try:
            values = oracle_table(cfg["p"], cfg["q"])
        except TorsionError as exc:
            raise translate(exc) from exc

        rows = OracleValueSerializer(values, many=True).data
        if options["format"] == "json":
            text = json.dumps({"p": cfg["p"], "q": cfg["q"], "values": rows}, ensure_ascii=False, indent=2) + "\n"
        else:
            frame = pd.DataFrame(rows, columns=["j", "k", "value", "branch"])
            if options["format"] == "csv":
                text = frame.to_csv(index=False, float_format="%.17g")
            else:
                table = frame.pivot(index="j", columns="k", values="value")
                table.columns = [f"k={k}" for k in table.columns]
                text = f"L({cfg['p']},{cfg['q']})\n{table.to_string(float_format=lambda x: f'{x:.12g}')}\n"
        emit(self, text, options.get("output"))
