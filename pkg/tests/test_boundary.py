"""Boundary residue cases, their assembly, and printed-form audits."""

from fractions import Fraction

import pytest

from ncresidue.boundary import (
    CASE_IDS,
    boundary_case,
    bracket_table,
    enumerate_cases,
    extrinsic_K,
    total_boundary_phi,
    wres_with_boundary,
)
from ncresidue.errors import (
    OddBarDimension,
    UnsupportedDimension,
    ValidationError,
)
from ncresidue.exact import GaussRational, ParamPoly
from ncresidue.geometry import GeometricBundle, standard_alphabet


class TestCaseEnumeration:
    def test_exactly_five_cases(self):
        cases = enumerate_cases(4)
        assert set(cases) == set(CASE_IDS)

    def test_case_data(self):
        cases = enumerate_cases(4)
        assert cases["aI"]["alpha"] == 1
        assert cases["aII"]["j"] == 1
        assert cases["aIII"]["k"] == 1
        assert cases["b"]["l"] == 1 - 4
        assert cases["c"]["r"] == -3
        # prefactors (-i)^{alpha+j+k+1} / (alpha! (j+k+1)!)
        assert cases["aII"]["prefactor"] == GaussRational(Fraction(-1, 2))
        assert cases["aIII"]["prefactor"] == GaussRational(Fraction(-1, 2))
        assert cases["b"]["prefactor"] == GaussRational(0, -1)
        assert cases["c"]["prefactor"] == GaussRational(0, -1)

    def test_dimension_validation(self):
        with pytest.raises(OddBarDimension):
            enumerate_cases(3)
        with pytest.raises(UnsupportedDimension):
            enumerate_cases(12)


class TestIndividualCases:
    @pytest.mark.parametrize("nbar", [2, 4, 6, 8, 10])
    def test_case_aI_vanishes(self, nbar):
        res = boundary_case("aI", nbar)
        assert res.value.is_zero()
        assert res.integrand.is_zero()

    @pytest.mark.parametrize("nbar", [2, 4])
    def test_aII_aIII_cancel(self, nbar):
        a2 = boundary_case("aII", nbar)
        a3 = boundary_case("aIII", nbar)
        assert (a2.value + a3.value).is_zero()

    @pytest.mark.parametrize("nbar", [2, 4])
    def test_b_c_cancel(self, nbar):
        b = boundary_case("b", nbar)
        c = boundary_case("c", nbar)
        assert (b.value + c.value).is_zero()

    def test_four_case_cancellation_at_six(self):
        # beyond nbar = 4 the cancellation happens only across all four
        # nonzero cases, not pairwise
        total = None
        for cid in ("aII", "aIII", "b", "c"):
            v = boundary_case(cid, 6).value
            total = v if total is None else total + v
        assert total.is_zero()
        assert not (
            boundary_case("b", 6).value + boundary_case("c", 6).value
        ).is_zero()

    def test_case_b_reference_value(self):
        al = standard_alphabet(6)
        b = boundary_case("b", 4)
        expected = (
            ParamPoly.var(al, "VolS") * ParamPoly.var(al, "X_6")
            * ParamPoly.var(al, "dimF") * ParamPoly.const(al, Fraction(-1, 4))
            + ParamPoly.var(al, "VolS") * ParamPoly.var(al, "Y_6")
            * ParamPoly.var(al, "trPhi")
            - ParamPoly.var(al, "VolS") * ParamPoly.var(al, "dimF")
            * ParamPoly.var(al, "hp0") * ParamPoly.const(al, Fraction(15, 8))
        )
        assert b.value == expected

    def test_by_parts_consistency_records(self):
        a3 = boundary_case("aIII", 4)
        rec = {c["term"]: c for c in a3.comparisons}["case_aIII_by_parts"]
        assert rec["agree"] is True
        b = boundary_case("b", 4)
        rec = {c["term"]: c for c in b.comparisons}["case_b_by_parts"]
        assert rec["agree"] is True

    def test_geo_substitution_validates_dimension(self):
        geo = GeometricBundle(4)
        with pytest.raises(ValidationError):
            boundary_case("b", 4, geo)  # needs full dimension 6

    def test_derivation_trace_present(self):
        res = boundary_case("c", 4)
        assert res.derivation_trace
        assert all({"id", "op", "value"} <= set(step) for step in
                   res.derivation_trace)


class TestAssembly:
    @pytest.mark.parametrize("nbar", [2, 4, 6])
    def test_total_phi_vanishes_with_structure(self, nbar):
        phi = total_boundary_phi(nbar)
        assert phi["value"].is_zero()
        assert all(phi["structure"].values())

    @pytest.mark.parametrize("nbar", [2, 4, 6])
    def test_boundary_equals_sum_of_cases(self, nbar):
        w = wres_with_boundary(nbar)
        assert w["boundary_equals_sum_of_cases"] is True
        total = None
        for cid in CASE_IDS:
            v = w["boundary"]["cases"][cid].value
            total = v if total is None else total + v
        assert total == w["boundary"]["value"]

    @pytest.mark.parametrize("nbar,coeff", [(2, -3), (4, -5), (6, -7)])
    def test_extrinsic_K(self, nbar, coeff):
        al = standard_alphabet(nbar + 2)
        expected = ParamPoly.var(al, "hp0") * ParamPoly.const(
            al, Fraction(coeff, 2)
        )
        assert extrinsic_K(nbar) == expected

    def test_printed_discrepancies_reported(self):
        w = wres_with_boundary(4)
        recs = {c["term"]: c for c in w["comparisons"]}
        assert recs["wres_K_coefficient"]["agree"] is False
        assert recs["phi_drift_part"]["agree"] is False
        assert recs["case_c_drift_part"]["agree"] is False

    def test_factorial_domain_flag_at_base_dimension(self):
        w = wres_with_boundary(2)
        recs = {c["term"]: c for c in w["comparisons"]}
        assert "out of domain" in recs["phi_drift_part"]["printed"]
        assert "factorial" in recs["wres_drift_coefficient"]["printed"]

    def test_numeric_substitution(self):
        nbar = 4
        n = nbar + 2
        geo = GeometricBundle(
            n,
            torsion={(1, 2, 3): Fraction(1, 2)},
            X=[Fraction(k, 3) for k in range(1, n + 1)],
            Y=[Fraction(-k, 5) for k in range(1, n + 1)],
            s=Fraction(1),
            divX=Fraction(2),
            divY=Fraction(-1),
            dimF=Fraction(2),
            trPhi=Fraction(3),
            trPhi2=Fraction(5, 2),
            hprime0=Fraction(1, 3),
        )
        w = wres_with_boundary(nbar, geo)
        # boundary cancels identically, so the substituted value is zero
        assert w["boundary"]["value"].is_zero()
        # interior density substitutes to a constant
        assert w["interior"]["density"].subs(geo.assignment()).is_constant()


class TestBracketTable:
    def test_reference_rows(self):
        rows = {r["term"]: r for r in bracket_table()}
        assert rows["bracket_m1_p1"]["engine"] == "1/4"
        assert rows["bracket_m1_p2"]["engine"] == "3/8"
        assert rows["bracket_m1_p1"]["agree"] is False
