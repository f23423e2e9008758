"""Shared helpers for the test suite: random exact data and the
numeric-quadrature oracle for half-plane line integrals."""

import math
from fractions import Fraction

import pytest

from ncresidue.exact import Alphabet, GaussRational, ParamPoly


def rand_fraction(rng, span=6):
    """Random exact rational with small numerator and denominator."""
    return Fraction(rng.randint(-span, span), rng.randint(1, 4))


def rand_gauss(rng, span=6):
    return GaussRational(rand_fraction(rng, span), rand_fraction(rng, span))


def rand_assignment(alphabet, rng, span=6):
    """Full numeric assignment for every name in the alphabet."""
    return {name: rand_fraction(rng, span) for name in alphabet.names}


def rand_poly(alphabet, rng, nterms=3, max_deg=2):
    """Random sparse polynomial over a few alphabet names."""
    poly = ParamPoly.zero(alphabet)
    names = list(alphabet.names)
    for _ in range(nterms):
        term = ParamPoly.const(alphabet, rand_gauss(rng))
        for _ in range(rng.randint(0, max_deg)):
            term = term * ParamPoly.var(alphabet, rng.choice(names))
        poly = poly + term
    return poly


def quad_line_integral(fn, limit=400):
    """Numeric integral of fn over the real line (complex-valued fn)."""
    from scipy.integrate import quad

    re, _ = quad(lambda x: fn(x).real, -math.inf, math.inf, limit=limit)
    im, _ = quad(lambda x: fn(x).imag, -math.inf, math.inf, limit=limit)
    return complex(re, im)


def assert_integral_matches_quadrature(f, assignment, tol=1e-8):
    """Exact pi-coefficient of the line integral vs scipy quadrature."""
    exact = f.real_line_integral().eval(assignment).to_complex() * math.pi
    numeric = quad_line_integral(f.numeric_fn(assignment))
    assert abs(exact - numeric) < tol, (
        f"exact {exact} vs quadrature {numeric} (|diff| = {abs(exact - numeric)})"
    )


@pytest.fixture
def small_alphabet():
    return Alphabet(["a", "b", "c"])
