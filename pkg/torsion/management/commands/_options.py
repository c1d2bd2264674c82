"""Flags and validation shared by the torsion management commands."""
from pathlib import Path

from django.core.management.base import CommandError

from torsion.exceptions import DegenerateParams, InvalidSpec, TorsionError


def add_lens_arguments(parser):
    parser.add_argument("--p", type=int, required=True)
    parser.add_argument("--q", type=int, required=True)


def add_run_arguments(parser):
    add_lens_arguments(parser)
    parser.add_argument("--k", action="append", help='k values (repeatable or comma separated), or "all"')
    parser.add_argument("--j", action="append", help='j values (repeatable or comma separated), or "all"')
    parser.add_argument("--seed", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--rho", type=float)
    parser.add_argument("--sigma", type=float)
    parser.add_argument("--s", type=float)
    parser.add_argument("--residual-tol", type=float)
    parser.add_argument("--compare-tol", type=float)
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--output", help="write to this path instead of standard output")


def _index_list(values):
    if not values:
        return None
    parts = [part.strip() for value in values for part in str(value).split(",") if part.strip()]
    return "all" if "all" in parts else parts


def run_data(options) -> dict:
    data = {"p": options["p"], "q": options["q"], "format": options.get("format") or "json"}
    for name in ("k", "j"):
        values = _index_list(options.get(name))
        if values is not None:
            data[name] = values
    for name in ("seed", "alpha", "rho", "sigma", "s", "residual_tol", "compare_tol"):
        if options.get(name) is not None:
            data[name] = options[name]
    return data


def format_errors(errors) -> str:
    if isinstance(errors, dict):
        parts = []
        for field, messages in errors.items():
            text = format_errors(messages)
            parts.append(text if field == "non_field_errors" else f"{field}: {text}")
        return "; ".join(parts)
    if isinstance(errors, (list, tuple)):
        return "; ".join(format_errors(e) for e in errors)
    return str(errors)


def validated(serializer_class, data) -> dict:
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        raise CommandError(format_errors(serializer.errors), returncode=2)
    return serializer.validated_data


def translate(exc: TorsionError) -> CommandError:
    code = 2 if isinstance(exc, (InvalidSpec, DegenerateParams)) else 1
    return CommandError(f"{type(exc).__name__}: {exc}", returncode=code)


def emit(command, text: str, output=None):
    if output:
        Path(output).write_text(text, encoding="utf-8")
        command.stderr.write(f"Wrote {output}")
    else:
        command.stdout.write(text, ending="")
