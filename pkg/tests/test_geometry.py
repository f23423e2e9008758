"""Geometric data bundle, normal form, and interior density."""

from fractions import Fraction

import pytest

from ncresidue.errors import (
    NonAntisymmetricTorsion,
    OddDimension,
    ValidationError,
)
from ncresidue.exact import GaussRational, ParamPoly
from ncresidue.geometry import (
    GeometricBundle,
    connection_and_E,
    interior_wres,
    lichnerowicz_normal_form,
    standard_alphabet,
    standard_label_trace,
    trace_E_density,
    trace_density_report,
)


def mono(*pairs):
    return tuple(sorted(pairs))


class TestStandardAlphabet:
    def test_core_names_present(self):
        al = standard_alphabet(4)
        for name in ("hp0", "s", "divX", "divY", "dimF", "trPhi", "trPhi2",
                     "VolS", "X_1", "X_4", "Y_2", "T_1_2_3"):
            assert name in al.names

    def test_label_trace_rules(self):
        al = standard_alphabet(4)
        rule = standard_label_trace(al)
        assert rule(()) == ParamPoly.var(al, "dimF")
        assert rule(("phi",)) == ParamPoly.var(al, "trPhi")
        assert rule(("phi", "phi")) == ParamPoly.var(al, "trPhi2")
        with pytest.raises(ValidationError):
            rule(("phi", "phi", "phi"))


class TestGeometricBundle:
    def test_rejects_odd_dimension(self):
        with pytest.raises(OddDimension):
            GeometricBundle(5)

    def test_rejects_wrong_vector_length(self):
        with pytest.raises(ValidationError):
            GeometricBundle(4, X=[Fraction(1)] * 3)

    def test_torsion_folds_permutations(self):
        g = GeometricBundle(
            4, torsion={(2, 1, 3): Fraction(1), (1, 2, 4): Fraction(2)}
        )
        assert g.torsion == {(1, 2, 3): Fraction(-1), (1, 2, 4): Fraction(2)}

    def test_torsion_antisymmetry_conflict(self):
        with pytest.raises(NonAntisymmetricTorsion):
            GeometricBundle(
                4, torsion={(2, 1, 3): Fraction(1), (1, 2, 3): Fraction(1)}
            )

    def test_torsion_repeated_index(self):
        with pytest.raises(NonAntisymmetricTorsion):
            GeometricBundle(4, torsion={(1, 1, 3): Fraction(1)})
        # a zero value on a degenerate triple is just dropped
        assert GeometricBundle(4, torsion={(1, 1, 3): Fraction(0)}).torsion == {}

    def test_symbolic_assignment_roundtrip(self):
        g = GeometricBundle(4, s=Fraction(7), dimF=Fraction(2))
        assignment = g.assignment()
        assert assignment["s"] == Fraction(7)
        assert assignment["dimF"] == Fraction(2)


class TestNormalForm:
    def test_shapes(self):
        geo = GeometricBundle(4)
        nf = lichnerowicz_normal_form(geo)
        assert len(nf.Ai) == 4
        omega, E = connection_and_E(nf)
        assert len(omega) == 4
        # E is a CliffordElement over the standard alphabet
        assert E.dim == 4


class TestInteriorDensity:
    @pytest.mark.parametrize("n", [4, 6])
    def test_oracle_assembly_identity(self, n):
        # density = (1/6) s tr(id) + Tr(E), with tr(id) = 2^{n/2} dimF
        geo = GeometricBundle(n)
        al = geo.alphabet
        density, (pi_power, prefactor) = interior_wres(geo, mode="oracle")
        assembled = (
            ParamPoly.var(al, "s")
            * ParamPoly.var(al, "dimF")
            * ParamPoly.const(al, Fraction(2 ** (n // 2), 6))
            + trace_E_density(geo, mode="oracle")
        )
        assert density == assembled
        assert pi_power == n // 2

    @pytest.mark.parametrize("n", [4, 6])
    def test_trace_E_quarter_s_term(self, n):
        geo = GeometricBundle(n)
        tre = trace_E_density(geo, mode="oracle")
        coeff = tre.coefficient(mono(("s", 1), ("dimF", 1)))
        assert coeff == GaussRational(Fraction(-2 ** (n // 2), 4))

    @pytest.mark.parametrize("n", [4, 6])
    def test_s_coefficients_oracle_vs_printed(self, n):
        geo = GeometricBundle(n)
        key = mono(("s", 1), ("dimF", 1))
        oracle, _ = interior_wres(geo, mode="oracle")
        printed, _ = interior_wres(geo, mode="printed")
        assert oracle.coefficient(key) == GaussRational(
            Fraction(-2 ** (n // 2), 12)
        )
        assert printed.coefficient(key) == GaussRational(Fraction(-2 ** n, 12))

    def test_density_report_structure(self):
        recs = {r["term"]: r for r in trace_density_report(4)}
        # normalized probes that agree between oracle and printed forms
        for term in ("scalar_curvature", "drift_divergence", "drift_pairing",
                     "torsion_square"):
            assert recs[term]["agree"] is True
        # known disagreements, reported as data
        for term in ("vector_square", "identity_trace_prefactor",
                     "twist_terms_dimF_factor"):
            assert recs[term]["agree"] is False

    def test_all_zero_data_zero_density(self):
        n = 4
        geo = GeometricBundle(
            n,
            torsion={},
            X=[Fraction(0)] * n,
            Y=[Fraction(0)] * n,
            s=Fraction(0),
            divX=Fraction(0),
            divY=Fraction(0),
            dimF=Fraction(0),
            trPhi=Fraction(0),
            trPhi2=Fraction(0),
            hprime0=Fraction(0),
        )
        density, _ = interior_wres(geo, mode="oracle")
        assert density.subs(geo.assignment()).is_zero()
