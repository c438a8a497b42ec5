import itertools
from fractions import Fraction

import pytest

from dreg.dmod import CurveModule
from dreg.ideals import Ideal, is_radical_squarefree_monomial
from dreg.parser import parse_operator
from dreg.polelattice import (LogLattice, NCChart, PoleModuleElement,
                              goodness_scan, pole_filtration_annihilator,
                              prop21_inclusion, theorem_backward_extraction,
                              theorem_forward_filtration, theta_XZ_ideal)
from dreg.polynomials import MPoly, RatFun
from dreg.regularity import IRREGULAR, REGULAR
from dreg.weyl import coordinate_names

ALL_CHARTS = [(n, r) for n in (1, 2, 3) for r in range(1, n + 1)]


def op(text):
    return parse_operator(text)


class TestThetaIdeal:
    def test_curve(self):
        ideal = theta_XZ_ideal(NCChart(1, 1))
        assert [str(g) for g in ideal.gens] == ["x*xi"]

    def test_surface_one_component(self):
        ideal = theta_XZ_ideal(NCChart(2, 1))
        assert [str(g) for g in ideal.gens] == ["x*xi", "eta"]

    def test_threefold_two_components(self):
        ideal = theta_XZ_ideal(NCChart(3, 2))
        assert [str(g) for g in ideal.gens] == ["x*xi", "y*eta", "zeta"]

    @pytest.mark.parametrize("n,r", ALL_CHARTS)
    def test_always_radical(self, n, r):
        assert is_radical_squarefree_monomial(theta_XZ_ideal(NCChart(n, r)))

    def test_invalid_chart(self):
        with pytest.raises(ValueError):
            NCChart(4, 1)
        with pytest.raises(ValueError):
            NCChart(2, 3)


class TestPoleModule:
    def test_pole_order_convention(self):
        chart = NCChart(2, 2)
        assert chart.pole_order((-1, -1)) == 2
        assert chart.pole_order((-3, 2)) == 3
        assert chart.pole_order((0, 0)) == 0

    def test_pole_order_subadditive_exact_on_pole_monomials(self):
        chart = NCChart(2, 2)
        pure = [(-1, 0), (0, -2), (-2, -1), (0, 0)]
        for a in pure:
            for b in pure:
                ab = tuple(x + y for x, y in zip(a, b))
                assert chart.pole_order(ab) == chart.pole_order(a) + chart.pole_order(b)
        # mixed signs only satisfy the inequality
        a, b = (-1, 1), (1, -1)
        ab = (0, 0)
        assert chart.pole_order(ab) <= chart.pole_order(a) + chart.pole_order(b)

    def test_element_validation(self):
        chart = NCChart(2, 1)
        with pytest.raises(ValueError):
            PoleModuleElement(chart, {(0, -1): 1})
        e = PoleModuleElement(chart, {(-2, 3): 1, (0, 0): 5})
        assert e.pole_order() == 2

    def test_derivation_action(self):
        chart = NCChart(1, 1)
        e = PoleModuleElement(chart, {(-3,): 1})
        # x d x^-3 = -3 x^-3: pole order preserved
        out = e.apply_lift((1,), (1,))
        assert out.terms == {(-3,): Fraction(-3)}
        # d x^-3 = -3 x^-4: pole order raised by exactly one
        out2 = e.apply_lift((0,), (1,))
        assert out2.terms == {(-4,): Fraction(-3)}


class TestAnnihilatorScan:
    @pytest.mark.parametrize("n,r", ALL_CHARTS)
    def test_matches_ideal_to_degree_six(self, n, r):
        report = pole_filtration_annihilator(NCChart(n, r), 6)
        assert report.matches_ideal
        assert not report.to_dict()["failures"]

    def test_witness_direction_example(self):
        # xi_1 does not annihilate: d_1 deepens the pole on the witness 1/x_1
        chart = NCChart(2, 1)
        report = pole_filtration_annihilator(chart, 3)
        labels = [row.description for row in report.witness_rows]
        assert any("xi" in lbl and "(-1, 0)" in lbl for lbl in labels)


class TestGoodness:
    @pytest.mark.parametrize("n,r", ALL_CHARTS)
    def test_from_level_r_on(self, n, r):
        ok, transcript = goodness_scan(NCChart(n, r), 6)
        assert ok
        assert all(row["ok"] for row in transcript)

    def test_failure_below_r_for_two_components(self):
        # at level r the pigeonhole needs j >= r: for j = r - 1 the
        # all-minus-one generator is not a single derivation image
        chart = NCChart(2, 2)
        beta = (-1, -1)
        assert chart.pole_order(beta) == 2
        assert all(beta[i] > -2 for i in range(2))


def lattice_catalog():
    c1 = coordinate_names(1)
    c2 = coordinate_names(2)
    z1, o1 = MPoly.zero(c1), MPoly.const(c1, 1)
    z2 = MPoly.zero(c2)
    return [
        ("trivial-rank1", NCChart(1, 1), LogLattice(NCChart(1, 1), 1, [[[z1]]])),
        ("euler-rank1", NCChart(1, 1),
         LogLattice(NCChart(1, 1), 1, [[[MPoly.const(c1, Fraction(1, 2))]]])),
        ("nilpotent-rank2", NCChart(1, 1),
         LogLattice(NCChart(1, 1), 2, [[[z1, o1], [z1, z1]]])),
        ("plane-rank1", NCChart(2, 2),
         LogLattice(NCChart(2, 2), 1,
                    [[[MPoly.const(c2, Fraction(1, 2))]], [[MPoly.const(c2, 3)]]])),
        ("halfplane-rank2", NCChart(2, 1),
         LogLattice(NCChart(2, 1), 2,
                    [[[MPoly.const(c2, 1), z2], [z2, MPoly.const(c2, 2)]],
                     [[z2, z2], [z2, z2]]])),
        ("poly-gamma-rank1", NCChart(2, 2),
         LogLattice(NCChart(2, 2), 1,
                    [[[MPoly.var(c2, "x")]], [[MPoly.const(c2, 5)]]])),
    ]


class TestForwardTheorem:
    def test_catalog_certifies(self):
        for name, chart, lat in lattice_catalog():
            report = theorem_forward_filtration(lat, chart, 4)
            assert report.certified, (name, report.to_dict())
            assert report.radical

    def test_non_integrable_rejected(self):
        c2 = coordinate_names(2)
        bad = LogLattice(NCChart(2, 2), 1,
                         [[[MPoly.var(c2, "y")]], [[MPoly.zero(c2)]]])
        with pytest.raises(ValueError, match="not integrable"):
            theorem_forward_filtration(bad, NCChart(2, 2), 2)

    def test_integrability_detects_commutator(self):
        c2 = coordinate_names(2)
        bad = LogLattice(NCChart(2, 2), 1,
                         [[[MPoly.var(c2, "y")]], [[MPoly.zero(c2)]]])
        fail = bad.integrability_failure()
        assert fail is not None
        l, k, mat = fail
        assert (l, k) == (0, 1)


class TestProp21:
    def test_pole_module_equality(self):
        for n, r in ALL_CHARTS[:4]:
            report = prop21_inclusion(None, NCChart(n, r), 4)
            assert report.holds
            assert not report.violations

    def test_euler_twist_annihilator_is_theta_ideal(self):
        report = prop21_inclusion(op("x*d - 5"), NCChart(1, 1), 4)
        assert report.holds
        assert "x*xi" in report.annihilating

    def test_irregular_twist_strictly_smaller(self):
        report = prop21_inclusion(op("x^2*d - 1"), NCChart(1, 1), 4)
        assert report.holds
        assert "x*xi" not in report.annihilating
        assert "x^2*xi" in report.annihilating

    def test_log_lattices_never_violate(self):
        for name, chart, lat in lattice_catalog():
            report = prop21_inclusion(lat, chart, 3)
            assert report.holds, (name, report.violations)


class TestBackwardExtraction:
    def test_euler_stable_at_zero(self):
        report = theorem_backward_extraction(op("x*d - 5"), 0)
        assert report.verdict == REGULAR
        assert not report.failing_entries

    def test_irregular_with_bound_two(self):
        report = theorem_backward_extraction(op("x^2*d - 1"), 2)
        assert report.verdict == IRREGULAR
        assert report.failing_entries
        # the s-level stability is still certified entrywise
        assert all(r.ok for r in report.certified_rows)

    def test_hypergeometric_with_bound_one(self):
        report = theorem_backward_extraction(
            op("x*(1 - x)*d^2 + (1 - 2*x)*d - 1/4"), 1)
        assert report.verdict == REGULAR

    def test_pole_bound_enforced(self):
        with pytest.raises(ValueError, match="pole order"):
            theorem_backward_extraction(op("x^3*d - 1"), 1)

    def test_agrees_with_kashiwara(self):
        from dreg.dmod import kashiwara_regular_at_zero
        for expr in ("x*d - 5", "x^2*d - 1", "d^2", "d^2 + 1"):
            p = op(expr)
            report = theorem_backward_extraction(p, 3)
            assert (report.verdict == REGULAR) == kashiwara_regular_at_zero(p).regular
