"""Command-line front end.

Loads an optional YAML config, applies flag overrides, runs the selected
computations, and writes the report to stdout.  Exit code 0 unless the
config fails to parse or validate; disagreements with printed closed forms
are findings, not failures.
"""

from __future__ import annotations

import argparse
import sys

from .config import SessionConfig, load_config
from .errors import (
    NonAntisymmetricTorsion,
    NonIncreasingTriple,
    OddBarDimension,
    ParseError,
    UnsupportedDimension,
    ValidationError,
)
from .report import emit, run_session

_CONFIG_ERRORS = (
    ParseError,
    ValidationError,
    OddBarDimension,
    UnsupportedDimension,
    NonIncreasingTriple,
    NonAntisymmetricTorsion,
)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ncresidue",
        description="Exact residue-density reports with printed-form audits.",
    )
    parser.add_argument("--dim", type=int, help="even boundary dimension (2..10)")
    parser.add_argument(
        "--case",
        choices=["a1", "a2", "a3", "b", "c", "all"],
        help="restrict the boundary computation to one case",
    )
    parser.add_argument("--mode", choices=["printed", "oracle"], help="density mode")
    parser.add_argument("--format", choices=["text", "json", "csv"], help="output format")
    parser.add_argument("--config", help="YAML config file or inline YAML text")
    parser.add_argument(
        "--verify-lemmas",
        type=int,
        metavar="TRIALS",
        help="run the trace-identity verification with this many trials",
    )
    parser.add_argument("--seed", type=int, help="seed for verification trials")
    return parser


def _merge(args):
    """SessionConfig from config file plus flag overrides."""
    if args.config is not None:
        base = load_config(args.config)
    else:
        if args.dim is None:
            raise ValidationError("dim", "provide --dim or --config")
        base = None

    kwargs = {
        "nbar": args.dim,
        "mode": args.mode,
        "cases": [args.case] if args.case else None,
        "fmt": args.format,
        "seed": args.seed,
        "verify_lemmas": args.verify_lemmas,
    }
    if base is None:
        clean = {k: v for k, v in kwargs.items() if v is not None}
        clean.setdefault("mode", "oracle")
        clean.setdefault("fmt", "text")
        clean.setdefault("seed", 0)
        clean.setdefault("verify_lemmas", 0)
        return SessionConfig(**clean)
    return SessionConfig(
        nbar=kwargs["nbar"] if kwargs["nbar"] is not None else base.nbar,
        mode=kwargs["mode"] or base.mode,
        cases=kwargs["cases"] or base.cases,
        fmt=kwargs["fmt"] or base.fmt,
        seed=kwargs["seed"] if kwargs["seed"] is not None else base.seed,
        verify_lemmas=kwargs["verify_lemmas"]
        if kwargs["verify_lemmas"] is not None
        else base.verify_lemmas,
        scalars=base.scalars,
        X=base.X,
        Y=base.Y,
        torsion=None
        if base.torsion is None
        else [[a, b, c, v] for (a, b, c), v in sorted(base.torsion.items())],
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge(args)
    except _CONFIG_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    report = run_session(cfg)
    sys.stdout.write(emit(report, cfg.fmt))
    return 0


if __name__ == "__main__":
    sys.exit(main())
