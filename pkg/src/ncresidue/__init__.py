"""Exact engine for Clifford traces, half-plane residue calculus, and
boundary symbol expansions."""

__version__ = "0.1.0"

from .exact import Alphabet, GaussRational, ParamPoly  # noqa: E402
from .clifford import (  # noqa: E402
    CliffordElement,
    clifford_product,
    spinor_trace,
    twisted_trace,
    verify_trace_lemmas,
)
from .halfplane import HalfPlaneRational, deriv_at_i  # noqa: E402
from .symbols import (  # noqa: E402
    SymbolExpansion,
    compose_symbols,
    invert_symbol,
    laplace_symbol,
    power_symbol,
)
from .geometry import (  # noqa: E402
    GeometricBundle,
    interior_wres,
    standard_alphabet,
    trace_E_density,
    trace_density_report,
)
from .boundary import (  # noqa: E402
    boundary_case,
    enumerate_cases,
    extrinsic_K,
    total_boundary_phi,
    wres_with_boundary,
)
from .config import SessionConfig, load_config  # noqa: E402
from .report import Report, emit, parse_report_json, run_session  # noqa: E402

__all__ = [
    "Alphabet",
    "GaussRational",
    "ParamPoly",
    "CliffordElement",
    "clifford_product",
    "spinor_trace",
    "twisted_trace",
    "verify_trace_lemmas",
    "HalfPlaneRational",
    "deriv_at_i",
    "SymbolExpansion",
    "compose_symbols",
    "invert_symbol",
    "laplace_symbol",
    "power_symbol",
    "GeometricBundle",
    "interior_wres",
    "standard_alphabet",
    "trace_E_density",
    "trace_density_report",
    "boundary_case",
    "enumerate_cases",
    "extrinsic_K",
    "total_boundary_phi",
    "wres_with_boundary",
    "SessionConfig",
    "load_config",
    "Report",
    "emit",
    "parse_report_json",
    "run_session",
    "__version__",
]
