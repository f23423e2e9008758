"""Session configuration: structured-text loading and validation.

Configs are YAML mappings.  Every geometric parameter defaults to symbolic;
numeric values must be exact integers or rational strings like "3/4".
"""

from __future__ import annotations

import os
from fractions import Fraction

import yaml

from .errors import (
    NonIncreasingTriple,
    OddBarDimension,
    ParseError,
    UnsupportedDimension,
    ValidationError,
)
from .geometry import GeometricBundle

CASE_ALIASES = {
    "a1": "aI",
    "a2": "aII",
    "a3": "aIII",
    "aI": "aI",
    "aII": "aII",
    "aIII": "aIII",
    "b": "b",
    "c": "c",
}
ALL_CASES = ("aI", "aII", "aIII", "b", "c")
MODES = ("oracle", "printed")
FORMATS = ("text", "json", "csv")

_SCALAR_FIELDS = ("s", "divX", "divY", "dimF", "trPhi", "trPhi2", "hprime0")


def _rational(field, value):
    """Exact value from an int or a 'p/q' string; None stays symbolic."""
    if value is None or value == "symbolic":
        return None
    if isinstance(value, bool):
        raise ValidationError(field, f"boolean {value!r} is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(field, f"not a rational: {value!r} ({exc})")
    if isinstance(value, float):
        raise ValidationError(
            field, f"float {value!r} rejected; use an exact rational string"
        )
    raise ValidationError(field, f"unsupported value {value!r}")


class SessionConfig:
    """Validated inputs for one reporting session."""

    __slots__ = (
        "nbar",
        "mode",
        "cases",
        "fmt",
        "seed",
        "verify_lemmas",
        "scalars",
        "X",
        "Y",
        "torsion",
        "raw",
    )

    def __init__(
        self,
        nbar,
        mode="oracle",
        cases=None,
        fmt="text",
        seed=0,
        verify_lemmas=0,
        scalars=None,
        X=None,
        Y=None,
        torsion=None,
    ):
        if not isinstance(nbar, int):
            raise ValidationError("nbar", f"integer required, got {nbar!r}")
        if nbar % 2:
            raise OddBarDimension(f"even boundary dimension required, got {nbar}")
        if not 2 <= nbar <= 10:
            raise UnsupportedDimension(f"boundary dimension {nbar} outside 2..10")
        self.nbar = nbar
        if mode not in MODES:
            raise ValidationError("mode", f"expected one of {MODES}, got {mode!r}")
        self.mode = mode
        if cases is None:
            cases = ALL_CASES
        else:
            resolved = []
            for c in cases:
                if c == "all":
                    resolved.extend(ALL_CASES)
                    continue
                if c not in CASE_ALIASES:
                    raise ValidationError("cases", f"unknown case {c!r}")
                resolved.append(CASE_ALIASES[c])
            cases = tuple(dict.fromkeys(resolved))
        self.cases = tuple(cases)
        if fmt not in FORMATS:
            raise ValidationError("format", f"expected one of {FORMATS}, got {fmt!r}")
        self.fmt = fmt
        if not isinstance(seed, int) or seed < 0:
            raise ValidationError("seed", f"nonnegative integer required, got {seed!r}")
        self.seed = seed
        if not isinstance(verify_lemmas, int) or verify_lemmas < 0:
            raise ValidationError(
                "verify_lemmas", f"nonnegative integer required, got {verify_lemmas!r}"
            )
        self.verify_lemmas = verify_lemmas

        self.scalars = {}
        for field in _SCALAR_FIELDS:
            self.scalars[field] = _rational(field, (scalars or {}).get(field))

        n = nbar + 2
        self.X = self._vector("X", X, n)
        self.Y = self._vector("Y", Y, n)
        self.torsion = self._torsion(torsion, n)
        self.raw = self.as_dict()

    @staticmethod
    def _vector(field, values, n):
        if values is None:
            return None
        if not isinstance(values, (list, tuple)):
            raise ValidationError(field, f"expected a list of {n} components")
        if len(values) != n:
            raise ValidationError(field, f"expected {n} components, got {len(values)}")
        out = []
        for k, v in enumerate(values):
            r = _rational(f"{field}[{k}]", v)
            if r is None:
                raise ValidationError(field, "vector components must be numeric")
            out.append(r)
        return out

    @staticmethod
    def _torsion(entries, n):
        if entries is None:
            return None
        out = {}
        for entry in entries:
            if not isinstance(entry, (list, tuple)) or len(entry) != 4:
                raise ValidationError(
                    "torsion", f"entry {entry!r} is not [a, b, c, value]"
                )
            a, b, c, v = entry
            if not all(isinstance(i, int) for i in (a, b, c)):
                raise ValidationError("torsion", f"indices in {entry!r} must be integers")
            if not (1 <= a < b < c <= n):
                raise NonIncreasingTriple(
                    f"triple ({a},{b},{c}) is not strictly increasing in 1..{n}"
                )
            if (a, b, c) in out:
                raise ValidationError("torsion", f"duplicate triple ({a},{b},{c})")
            r = _rational(f"torsion[{a},{b},{c}]", v)
            if r is None:
                raise ValidationError("torsion", "component values must be numeric")
            out[(a, b, c)] = r
        return out

    def bundle(self):
        """GeometricBundle carrying this config's exact point data."""
        s = self.scalars
        return GeometricBundle(
            self.nbar + 2,
            torsion=self.torsion,
            X=self.X,
            Y=self.Y,
            s=s["s"],
            divX=s["divX"],
            divY=s["divY"],
            dimF=s["dimF"],
            trPhi=s["trPhi"],
            trPhi2=s["trPhi2"],
            hprime0=s["hprime0"],
        )

    def as_dict(self):
        """Canonical plain-data rendering (for hashing and metadata)."""
        def render(v):
            if v is None:
                return "symbolic"
            return str(v)

        return {
            "nbar": self.nbar,
            "mode": self.mode,
            "cases": list(self.cases),
            "format": self.fmt,
            "seed": self.seed,
            "verify_lemmas": self.verify_lemmas,
            "scalars": {k: render(v) for k, v in sorted(self.scalars.items())},
            "X": None if self.X is None else [str(v) for v in self.X],
            "Y": None if self.Y is None else [str(v) for v in self.Y],
            "torsion": None
            if self.torsion is None
            else [[a, b, c, str(v)] for (a, b, c), v in sorted(self.torsion.items())],
        }


def load_config(source):
    """SessionConfig from a YAML path or inline YAML text."""
    text = source
    if isinstance(source, str) and os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise ParseError(
                f"invalid config: {getattr(exc, 'problem', exc)}",
                line=mark.line + 1,
                column=mark.column + 1,
            )
        raise ParseError(f"invalid config: {exc}")
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ParseError("config must be a mapping of keys to values")

    known = {
        "nbar",
        "dim",
        "mode",
        "cases",
        "case",
        "format",
        "seed",
        "verify_lemmas",
        "X",
        "Y",
        "torsion",
        *_SCALAR_FIELDS,
    }
    for key in data:
        if key not in known:
            raise ValidationError(str(key), "unknown config key")

    nbar = data.get("nbar", data.get("dim"))
    if nbar is None:
        raise ValidationError("nbar", "missing boundary dimension")
    cases = data.get("cases")
    if cases is None and "case" in data:
        cases = [data["case"]]
    if isinstance(cases, str):
        cases = [cases]
    return SessionConfig(
        nbar=nbar,
        mode=data.get("mode", "oracle"),
        cases=cases,
        fmt=data.get("format", "text"),
        seed=data.get("seed", 0),
        verify_lemmas=data.get("verify_lemmas", 0),
        scalars={k: data.get(k) for k in _SCALAR_FIELDS},
        X=data.get("X"),
        Y=data.get("Y"),
        torsion=data.get("torsion"),
    )
