"""Symbol calculus: jet ring, operator symbol, inversion, composition."""

import random
from fractions import Fraction

import pytest

from ncresidue.errors import NonCanonicalInput
from ncresidue.exact import GaussRational, ParamPoly
from ncresidue.geometry import (
    GeometricBundle,
    lichnerowicz_normal_form,
    standard_alphabet,
)
from ncresidue.symbols import (
    CliffXi,
    SymbolExpansion,
    XiExpr,
    compose_symbols,
    drift_subsymbol_parts,
    invert_symbol,
    laplace_symbol,
    power_symbol,
)
from conftest import rand_assignment


def subs_xi(xe, assignment):
    out = XiExpr.zero(xe.alphabet)
    for mono, poly in xe.terms.items():
        out = out + XiExpr(xe.alphabet, {mono: poly.subs(assignment)})
    return out


def subs_cliffxi(cx, assignment):
    return CliffXi(
        cx.dim,
        cx.alphabet,
        {key: subs_xi(xe, assignment) for key, xe in cx.terms.items()},
    )


def subs_expansion(expansion, assignment):
    return SymbolExpansion(
        expansion.dim,
        expansion.alphabet,
        {r: subs_cliffxi(cx, assignment) for r, cx in expansion.orders.items()},
    )


class TestJetRing:
    def test_u_restricts_to_one_plus_xi_square(self):
        al = standard_alphabet(4)
        u = XiExpr.u_power(al, 1)
        f = u.restrict_sphere()
        assert [p.constant_value().re for p in f.num] == [1, 0, 1]

    def test_normal_jet_of_u(self):
        # d/dx_n of u picks up hp0 * w; on the sphere that is the constant hp0
        al = standard_alphabet(4)
        f = XiExpr.u_power(al, 1).d_xn().restrict_sphere()
        assert (f.a, f.b) == (0, 0)
        assert f.num[0] == ParamPoly.var(al, "hp0")

    def test_xi_derivative_of_u(self):
        al = standard_alphabet(4)
        got = XiExpr.u_power(al, 2).d_xin()
        expected = XiExpr.monomial(al, m=1, p=1, coeff=4)
        assert got == expected

    def test_odd_tangential_power_drops(self):
        al = standard_alphabet(4)
        xe = XiExpr.monomial(al, m=1, tang=((1, 1),))
        assert xe.restrict_sphere().is_zero()

    def test_even_tangential_power_rejected(self):
        al = standard_alphabet(4)
        xe = XiExpr.monomial(al, tang=((1, 2),))
        with pytest.raises(NonCanonicalInput):
            xe.restrict_sphere()


class TestOperatorSymbol:
    def test_orders_and_leading_term(self):
        al = standard_alphabet(4)
        op = laplace_symbol(4, al)
        assert set(op.orders) == {2, 1}
        assert op[2].scalar_part() == {(): XiExpr.u_power(al, 1)}
        assert op[0].is_zero()

    def test_first_order_carries_drift_and_twist(self):
        al = standard_alphabet(6)
        op = laplace_symbol(6, al)
        labels = set()
        for (_, label) in op[1].terms:
            labels.add(label)
        assert () in labels and ("phi",) in labels

    def test_collar_scalar_default(self):
        # the normal-direction scalar defaults to (dim/2) * hp0
        al = standard_alphabet(4)
        op = laplace_symbol(4, al)
        assert op.meta["gdn"] == ParamPoly.var(al, "hp0") * ParamPoly.const(al, 2)


class TestInversionAndComposition:
    def test_leading_inverse(self):
        al = standard_alphabet(4)
        op = laplace_symbol(4, al)
        par = invert_symbol(op, 1)
        assert par[-2].scalar_part() == {(): XiExpr.u_power(al, -1)}

    def test_symbolic_closure_shallow(self):
        al = standard_alphabet(4)
        op = laplace_symbol(4, al)
        comp = compose_symbols(op, invert_symbol(op, 2), -1)
        assert comp[0] == CliffXi.scalar(4, XiExpr.const(al, 1))
        assert comp[-1].is_zero()

    @pytest.mark.parametrize("n", [4, 6])
    def test_numeric_closure_depth_two(self, n):
        rng = random.Random(20 + n)
        al = standard_alphabet(n)
        geo = GeometricBundle(n)
        nf = lichnerowicz_normal_form(geo)
        op = laplace_symbol(n, al, b_term=nf.B)
        num = subs_expansion(op, rand_assignment(al, rng, span=3))
        comp = compose_symbols(num, invert_symbol(num, 3), -1)
        assert comp[0] == CliffXi.scalar(n, XiExpr.const(al, 1))
        assert comp[-1].is_zero()


class TestSubsymbolStructure:
    def test_drift_parts_are_order_minus_three(self):
        al = standard_alphabet(4)
        op = laplace_symbol(4, al)
        b1, b2, b3 = drift_subsymbol_parts(op)
        par = invert_symbol(op, 2)
        assert b1 + b2 + b3 == par[-3]

    def test_power_symbol_identity_at_base_dimension(self):
        # nbar = 2 makes the fractional power the identity operator
        al = standard_alphabet(4)
        op = laplace_symbol(4, al)
        pw = power_symbol(op, 2, invert_symbol(op, 1))
        assert pw[0] == CliffXi.scalar(4, XiExpr.const(al, 1))
        assert pw[-1].is_zero()

    def test_power_symbol_top_order(self):
        al = standard_alphabet(6)
        op = laplace_symbol(6, al)
        pw = power_symbol(op, 4, invert_symbol(op, 1))
        assert pw[-2].scalar_part() == {(): XiExpr.u_power(al, -1)}
        assert set(pw.meta["parts"]) == {"normal", "drift", "twist"}
