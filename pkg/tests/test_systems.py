import random
from fractions import Fraction

import pytest

from dreg.dmod import ContradictionError
from dreg.operators import UnivarOperator
from dreg.parser import parse_operator
from dreg.polynomials import MPoly, RatFun
from dreg.regularity import (GLOBAL_IRREGULAR, GLOBAL_REGULAR, INFINITY,
                             IRREGULAR, REGULAR, fuchs_regular_at)
from dreg.systems import (ConnectionSystem, CyclicVectorError, EXCEEDED_BOUND,
                          STABILIZED, cyclic_vector, regular_system_report,
                          saturate_lattice)

from conftest import random_operator


def rat(text):
    from dreg.parser import parse_ratfun
    return parse_ratfun(text)


def system(rows):
    return ConnectionSystem([[rat(e) for e in row] for row in rows])


class TestCyclicVector:
    def test_rank_one_euler(self):
        res = cyclic_vector(system([["-5/x"]]))
        assert res.operator == parse_operator("d - 5/x")
        assert not res.determinant.is_zero()

    def test_companion_round_trip(self):
        for expr in ("d^2 - x", "x*d - 5", "x*(1 - x)*d^2 + (1 - 2*x)*d - 1/4"):
            p = parse_operator(expr).monic()
            res = cyclic_vector(ConnectionSystem.companion(p))
            assert res.operator == p

    def test_diagonal_example(self):
        res = cyclic_vector(system([["0", "0"], ["0", "-1/x"]]))
        assert res.operator.order() == 2
        # singularities only at 0 and infinity, Fuchs-regular at both
        for point in (Fraction(0), INFINITY):
            assert fuchs_regular_at(res.operator, point).verdict == REGULAR

    def test_gauge_invariant_verdicts(self):
        p = parse_operator("d^2 - x")
        base = ConnectionSystem.companion(p)
        for g in ([[1, 1], [0, 1]], [[2, 0], [3, 1]], [[0, 1], [1, 0]]):
            conj = base.conjugate(g)
            res = cyclic_vector(conj)
            for point in (Fraction(0), INFINITY):
                assert (fuchs_regular_at(res.operator, point).verdict
                        == fuchs_regular_at(p, point).verdict)


class TestSaturation:
    def test_euler_immediately_stable(self):
        res = saturate_lattice(system([["-5/x"]]), 0)
        assert res.status == STABILIZED and res.steps == 0

    def test_irregular_never_stabilizes(self):
        res = saturate_lattice(system([["1/x^2"]]), 0)
        assert res.status == EXCEEDED_BOUND

    def test_hypergeometric_stabilizes_quickly(self):
        p = parse_operator("x*(1 - x)*d^2 + (1 - 2*x)*d - 1/4")
        res = saturate_lattice(ConnectionSystem.companion(p), 0)
        assert res.status == STABILIZED and res.steps <= 2

    def test_stabilized_lattice_idempotent(self):
        sysm = system([["-5/x"]])
        res = saturate_lattice(sysm, 0)
        lattice = res.lattice
        shift = RatFun.x("x")
        for g in lattice.generators():
            image = tuple(shift * e for e in sysm.functional_derivative(g))
            assert lattice.contains(image)

    def test_exceeded_bound_is_no_verdict(self):
        res = saturate_lattice(system([["1/x^2"]]), 0, max_steps=2)
        assert res.status == EXCEEDED_BOUND
        assert res.lattice is None


class TestReports:
    def test_euler(self):
        rep = regular_system_report(system([["-5/x"]]))
        assert rep.verdict == GLOBAL_REGULAR
        assert [(str(p.point), p.fuchs.verdict, p.saturation.status)
                for p in rep.points] == [
            ("0", REGULAR, STABILIZED), ("inf", REGULAR, STABILIZED)]
        assert all(p.stable_extension_exists for p in rep.points)

    def test_airy_companion(self):
        p = parse_operator("d^2 - x")
        rep = regular_system_report(ConnectionSystem.companion(p))
        assert rep.verdict == GLOBAL_IRREGULAR
        inf = rep.points[-1]
        assert str(inf.point) == "inf"
        assert inf.fuchs.verdict == IRREGULAR
        assert inf.saturation.status == EXCEEDED_BOUND
        assert not inf.stable_extension_exists

    def test_exp_twist(self):
        rep = regular_system_report(system([["1/x^2"]]))
        origin = rep.points[0]
        assert origin.fuchs.verdict == IRREGULAR
        assert origin.saturation.status == EXCEEDED_BOUND
        assert rep.verdict == GLOBAL_IRREGULAR

    def test_stabilized_implies_regular_sweep(self):
        rng = random.Random(113)
        checked = 0
        for _ in range(15):
            p = random_operator(rng, order=2, degree=2, pole=2).monic()
            sysm = ConnectionSystem.companion(p)
            rep = regular_system_report(sysm)
            for pt in rep.points:
                if pt.saturation.stabilized:
                    assert pt.fuchs.verdict == REGULAR
                    checked += 1
        assert checked > 10

    def test_infinity_chart(self):
        sysm = system([["-5/x"]])
        inf_sys = sysm.at_infinity()
        assert inf_sys.var == "t"
        res = cyclic_vector(inf_sys)
        assert fuchs_regular_at(res.operator, 0).verdict == REGULAR
