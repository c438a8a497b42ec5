"""Normal-crossing pole modules and logarithmic lattices in up to three
variables.

The chart carries Z = {x_1 ... x_r = 0} inside affine n-space.  The module
of functions with poles on Z is filtered by total pole order across the
dividing coordinates; with that convention the derivation algebra raises
the filtration by exactly one from level r on, and the graded annihilator
is the squarefree ideal generated by the logarithmic symbols.  Everything
here certifies those statements on bounded monomial windows, plus the
forward direction of the comparison theorem for log lattices and the
curve-level backward extraction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .dmod import CurveModule, CyclicFiltration
from .ideals import (DEFAULT_BUDGET, Ideal, groebner_basis,
                     is_radical_squarefree_monomial, normal_form)
from .linalg import mat_mul, mat_sub
from .operators import UnivarOperator
from .polynomials import INF, MPoly, RatFun
from .regularity import IRREGULAR, REGULAR
from .weyl import coordinate_names, symbol_names


@dataclass(frozen=True)
class NCChart:
    """A normal-crossing chart: Z = {x_1 ... x_r = 0} in A^n."""

    n: int
    r: int

    def __post_init__(self):
        if not (1 <= self.r <= self.n <= 3):
            raise ValueError("charts are desk scale: 1 <= r <= n <= 3")

    @property
    def ring(self) -> tuple:
        return coordinate_names(self.n) + symbol_names(self.n)

    def pole_order(self, alpha: tuple) -> int:
        """Total pole order across the dividing coordinates."""
        return sum(max(0, -alpha[i]) for i in range(self.r))

    def poly_degree(self, alpha: tuple) -> int:
        return sum(max(0, a) for a in alpha)

    def monomials_with_pole(self, pole: int, max_poly: int):
        """Exponent vectors in Z^n with the given total pole order."""
        ranges = []
        for i in range(self.n):
            low = -pole if i < self.r else 0
            ranges.append(range(low, max_poly + 1))
        for alpha in itertools.product(*ranges):
            if self.pole_order(alpha) == pole and self.poly_degree(alpha) <= max_poly:
                yield alpha


def theta_XZ_ideal(chart: NCChart) -> Ideal:
    """Symbols of derivations preserving the ideal of Z:
    (x_1 xi_1, ..., x_r xi_r, xi_(r+1), ..., xi_n)."""
    ring = chart.ring
    gens = []
    for i in range(chart.r):
        e = [0] * (2 * chart.n)
        e[i] = 1
        e[chart.n + i] = 1
        gens.append(MPoly.monomial(ring, e))
    for i in range(chart.r, chart.n):
        e = [0] * (2 * chart.n)
        e[chart.n + i] = 1
        gens.append(MPoly.monomial(ring, e))
    return Ideal(ring, gens)


def _falling(a: int, b: int) -> int:
    out = 1
    for k in range(b):
        out *= a - k
    return out


def _apply_lift(chart: NCChart, a: tuple, b: tuple, alpha: tuple):
    """x^a d^b applied to the pole-module monomial x^alpha.

    Returns (coefficient, exponent) with coefficient 0 for the zero image.
    """
    coeff = 1
    for i in range(chart.n):
        coeff *= _falling(alpha[i], b[i])
        if not coeff:
            return 0, None
    exp = tuple(alpha[i] + a[i] - b[i] for i in range(chart.n))
    return coeff, exp


@dataclass(frozen=True)
class ScanRow:
    description: str
    ok: bool


@dataclass(frozen=True)
class AnnihilatorReport:
    ideal: Ideal
    matches_ideal: bool
    stability_rows: tuple
    witness_rows: tuple

    def to_dict(self) -> dict:
        return {"ideal": [str(g) for g in self.ideal.gens],
                "matches_ideal": self.matches_ideal,
                "stability_checks": len(self.stability_rows),
                "witness_checks": len(self.witness_rows),
                "failures": [r.description for r in
                             self.stability_rows + self.witness_rows if not r.ok]}


def _symbol_monomials(chart: NCChart, bound: int):
    """Exponents (a, b) of monomials x^a xi^b of total degree <= bound."""
    n = chart.n
    for total in range(1, bound + 1):
        for exps in itertools.product(range(total + 1), repeat=2 * n):
            if sum(exps) == total:
                yield exps[:n], exps[n:]


def _in_monomial_ideal(chart: NCChart, a: tuple, b: tuple) -> bool:
    for i in range(chart.r):
        if a[i] >= 1 and b[i] >= 1:
            return True
    for i in range(chart.r, chart.n):
        if b[i] >= 1:
            return True
    return False


def pole_filtration_annihilator(chart: NCChart, bound: int = 6) -> AnnihilatorReport:
    """Certify Ann Gr_F = (x_l xi_l, xi_m) on the scanned window.

    Containment: every ideal generator, lifted, preserves each filtration
    level on the full monomial basis up to the bound.  Reverse: every
    symbol monomial outside the ideal acts nonzero on the witness
    1/(product of the x_l named by its d-support).
    """
    ideal = theta_XZ_ideal(chart)
    stability = []
    ok_all = True
    for i in range(chart.n):
        if i < chart.r:
            a = tuple(1 if j == i else 0 for j in range(chart.n))
        else:
            a = (0,) * chart.n
        b = tuple(1 if j == i else 0 for j in range(chart.n))
        gen_name = f"x{i+1}*xi{i+1}" if i < chart.r else f"xi{i+1}"
        for k in range(bound + 1):
            for alpha in chart.monomials_with_pole(k, bound):
                coeff, exp = _apply_lift(chart, a, b, alpha)
                ok = coeff == 0 or chart.pole_order(exp) <= k
                if not ok:
                    ok_all = False
                stability.append(ScanRow(
                    f"{gen_name} on x^{alpha} at level {k}", ok))
    witnesses = []
    for a, b in _symbol_monomials(chart, bound):
        if _in_monomial_ideal(chart, a, b):
            continue
        support = [i for i in range(chart.r) if b[i] >= 1]
        witness = tuple(-1 if i in support else 0 for i in range(chart.n))
        k_in = chart.pole_order(witness)
        coeff, exp = _apply_lift(chart, a, b, witness)
        d = sum(b)
        ok = coeff != 0 and chart.pole_order(exp) == k_in + d
        if not ok:
            ok_all = False
        witnesses.append(ScanRow(
            f"x^{a} xi^{b} acts nonzero on x^{witness}", ok))
    return AnnihilatorReport(ideal, ok_all, tuple(stability), tuple(witnesses))


def goodness_scan(chart: NCChart, bound: int = 6) -> tuple[bool, list]:
    """Check that first-order operators generate each new level from r on:
    every top generator of F^(j+1) is a single derivation applied to a
    generator of F^j."""
    transcript = []
    ok_all = True
    for j in range(chart.r, bound + 1):
        for beta in chart.monomials_with_pole(j + 1, 0):
            if any(beta[i] > 0 for i in range(chart.n)):
                continue
            pick = next((i for i in range(chart.r) if beta[i] <= -2), None)
            ok = pick is not None
            if ok:
                inner = tuple(b + (1 if i == pick else 0)
                              for i, b in enumerate(beta))
                # d_pick x^inner = (inner_pick) x^beta, coefficient nonzero
                ok = chart.pole_order(inner) == j and inner[pick] != 0
            if not ok:
                ok_all = False
            transcript.append({"level": j + 1, "generator": list(beta),
                               "derivation": pick, "ok": ok})
    return ok_all, transcript


class PoleModuleElement:
    """Finite Q-combination of monomials x^alpha with poles only on Z."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: NCChart, terms=None):
        self.chart = chart
        clean = {}
        if terms:
            for alpha, c in terms.items():
                alpha = tuple(alpha)
                if len(alpha) != chart.n:
                    raise ValueError("wrong exponent length")
                if any(alpha[i] < 0 for i in range(chart.r, chart.n)):
                    raise ValueError("poles allowed only on the dividing coordinates")
                c = Fraction(c)
                if c:
                    clean[alpha] = c
        self.terms = clean

    def pole_order(self) -> int:
        if not self.terms:
            return 0
        return max(self.chart.pole_order(a) for a in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def apply_lift(self, a: tuple, b: tuple) -> "PoleModuleElement":
        out: dict[tuple, Fraction] = {}
        for alpha, c in self.terms.items():
            coeff, exp = _apply_lift(self.chart, a, b, alpha)
            if coeff:
                s = out.get(exp, Fraction(0)) + c * coeff
                if s:
                    out[exp] = s
                else:
                    out.pop(exp, None)
        return PoleModuleElement(self.chart, out)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*x^{a}" for a, c in sorted(self.terms.items()))


class LogLattice:
    """Rank-m lattice with logarithmic connection matrices over Q[x].

    gammas[l] is the matrix of the action of x_l d_l (l < r) or d_l
    (l >= r) on the frame, on top of the derivation itself.
    """

    __slots__ = ("chart", "rank", "gammas")

    def __init__(self, chart: NCChart, rank: int, gammas):
        self.chart = chart
        self.rank = rank
        coords = coordinate_names(chart.n)
        mats = []
        if len(gammas) != chart.n:
            raise ValueError("one connection matrix per coordinate")
        for g in gammas:
            if len(g) != rank:
                raise ValueError("connection matrix of wrong rank")
            rows = []
            for row in g:
                rows.append(tuple(
                    e if isinstance(e, MPoly) else MPoly.const(coords, e)
                    for e in row))
            mats.append(tuple(rows))
        self.gammas = tuple(mats)

    def _derive(self, l: int, p: MPoly) -> MPoly:
        coords = coordinate_names(self.chart.n)
        d = p.diff(coords[l])
        if l < self.chart.r:
            return MPoly.var(coords, coords[l]) * d
        return d

    def integrability_failure(self):
        """None when flat; otherwise (l, k, commutator matrix)."""
        for l in range(self.chart.n):
            for k in range(l + 1, self.chart.n):
                gl, gk = self.gammas[l], self.gammas[k]
                dlk = [[self._derive(l, gk[i][j]) for j in range(self.rank)]
                       for i in range(self.rank)]
                dkl = [[self._derive(k, gl[i][j]) for j in range(self.rank)]
                       for i in range(self.rank)]
                bracket = mat_sub(mat_mul([list(r) for r in gl], [list(r) for r in gk]),
                                  mat_mul([list(r) for r in gk], [list(r) for r in gl]))
                total = mat_sub(mat_sub(dlk, dkl), [[-e for e in row] for row in bracket])
                # total = der_l(G_k) - der_k(G_l) + [G_l, G_k]
                if any(not e.is_zero() for row in total for e in row):
                    return l, k, total
        return None

    # elements of the windowed module: dict[(alpha, frame index)] -> Fraction

    def frame_element(self, alpha: tuple, j: int) -> dict:
        return {(tuple(alpha), j): Fraction(1)}

    def apply_derivation(self, l: int, elem: dict) -> dict:
        """Action of x_l d_l (l < r) or d_l (l >= r) twisted by gamma."""
        chart = self.chart
        out: dict = {}

        def add(key, c):
            s = out.get(key, Fraction(0)) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)

        for (alpha, j), c in elem.items():
            if l < chart.r:
                if alpha[l]:
                    add((alpha, j), c * alpha[l])
            else:
                if alpha[l]:
                    shifted = tuple(a - (1 if i == l else 0)
                                    for i, a in enumerate(alpha))
                    add((shifted, j), c * alpha[l])
            for i in range(self.rank):
                entry = self.gammas[l][i][j]
                for e, ce in entry.terms.items():
                    shifted = tuple(a + g for a, g in zip(alpha, e))
                    add((shifted, i), c * ce)
        return out

    def apply_symbol_monomial(self, a: tuple, b: tuple, elem: dict) -> dict | None:
        """Action of the lift x^a d^b on a windowed element.

        d_l for a dividing coordinate is realized as x_l^(-1) (x_l d_l);
        the inverse powers fold into the final monomial shift, which keeps
        everything in the pole-module window.
        """
        chart = self.chart
        work = dict(elem)
        for l in range(chart.n):
            for _ in range(b[l]):
                if l < chart.r:
                    work = self.apply_derivation(l, work)
                    # divide by x_l
                    work = {(tuple(al - (1 if i == l else 0) for i, al in enumerate(alpha)), j): c
                            for (alpha, j), c in work.items()}
                else:
                    work = self.apply_derivation(l, work)
        out: dict = {}
        for (alpha, j), c in work.items():
            shifted = tuple(al + ai for al, ai in zip(alpha, a))
            s = out.get((shifted, j), Fraction(0)) + c
            if s:
                out[(shifted, j)] = s
            else:
                out.pop((shifted, j), None)
        return out

    def element_pole_order(self, elem: dict) -> int:
        if not elem:
            return 0
        return max(self.chart.pole_order(alpha) for (alpha, _j) in elem)


@dataclass(frozen=True)
class ForwardReport:
    ideal: Ideal
    radical: bool
    stable: bool
    rows: tuple
    inclusion_holds: bool

    @property
    def certified(self) -> bool:
        return self.radical and self.stable and self.inclusion_holds

    def to_dict(self) -> dict:
        return {"ideal": [str(g) for g in self.ideal.gens],
                "radical": self.radical,
                "generators_stabilize": self.stable,
                "inclusion_holds": self.inclusion_holds,
                "checks": len(self.rows),
                "failures": [r.description for r in self.rows if not r.ok]}


def theorem_forward_filtration(lattice: LogLattice, chart: NCChart,
                               bound: int = 4, twist: int | None = None) -> ForwardReport:
    """Forward comparison: a log lattice induces the filtration with level
    zero the twisted lattice, and every logarithmic symbol stabilizes every
    scanned level, so the graded annihilator is the radical squarefree
    ideal.

    Raises on non-integrable input, reporting the failed commutator.
    """
    fail = lattice.integrability_failure()
    if fail is not None:
        l, k, mat = fail
        raise ValueError(
            f"lattice is not integrable: [D_{l+1}, D_{k+1}] has nonzero entries "
            f"{[[str(e) for e in row] for row in mat]}")
    if twist is None:
        twist = chart.r
    ideal = theta_XZ_ideal(chart)
    radical = is_radical_squarefree_monomial(ideal)
    rows = []
    stable = True
    for i in range(chart.n):
        gen_name = f"x{i+1}*xi{i+1}" if i < chart.r else f"xi{i+1}"
        for k in range(bound + 1):
            level = twist + k
            for alpha in _window(chart, level, bound):
                for j in range(lattice.rank):
                    elem = lattice.frame_element(alpha, j)
                    image = lattice.apply_derivation(i, elem)
                    ok = lattice.element_pole_order(image) <= level if image else True
                    if not ok:
                        stable = False
                    rows.append(ScanRow(
                        f"{gen_name} on x^{alpha} e_{j} at level {level}", ok))
    incl = prop21_inclusion(lattice, chart, bound, twist=twist)
    return ForwardReport(ideal, radical, stable, tuple(rows), incl.holds)


def _window(chart: NCChart, level: int, max_poly: int):
    for pole in range(level + 1):
        yield from chart.monomials_with_pole(pole, max_poly)


@dataclass(frozen=True)
class Prop21Report:
    holds: bool
    annihilating: tuple
    violations: tuple

    def to_dict(self) -> dict:
        return {"holds": self.holds,
                "annihilating_monomials": list(self.annihilating),
                "violations": list(self.violations)}


def prop21_inclusion(data, chart: NCChart, bound: int = 4,
                     twist: int | None = None,
                     budget: int = DEFAULT_BUDGET) -> Prop21Report:
    """Graded-annihilator monomials up to the bound all lie in the
    logarithmic symbol ideal.

    Accepts the bare chart pole module (data None), a LogLattice, a curve
    operator, or a curve theta-action matrix.
    """
    ideal = theta_XZ_ideal(chart)
    gb = groebner_basis(ideal, budget=budget)
    found: list[str] = []
    violations: list[str] = []

    def check(a, b):
        mono = MPoly.monomial(chart.ring, tuple(a) + tuple(b))
        if normal_form(mono, gb).is_zero():
            found.append(str(mono))
            return
        violations.append(str(mono))

    if data is None:
        report = pole_filtration_annihilator(chart, bound)
        if not report.matches_ideal:
            return Prop21Report(False, (), ("window scan failed",))
        for a, b in _symbol_monomials(chart, bound):
            if _in_monomial_ideal(chart, a, b):
                check(a, b)
        return Prop21Report(not violations, tuple(found), tuple(violations))

    if isinstance(data, LogLattice):
        if twist is None:
            twist = chart.r
        for a, b in _symbol_monomials(chart, bound):
            if _annihilates_lattice(data, chart, a, b, bound, twist):
                check(a, b)
        return Prop21Report(not violations, tuple(found), tuple(violations))

    # curve cases reduce to the 1-variable module machinery
    if chart.n != 1:
        raise ValueError("curve data requires a 1-variable chart")
    if isinstance(data, UnivarOperator):
        module = CurveModule.from_operator(data)
    elif isinstance(data, CurveModule):
        module = data
    else:
        module = CurveModule("x", data)
    for a, b in module.annihilator_monomials(bound):
        check((a,), (b,))
    return Prop21Report(not violations, tuple(found), tuple(violations))


def _annihilates_lattice(lattice: LogLattice, chart: NCChart, a: tuple,
                         b: tuple, bound: int, twist: int) -> bool:
    d = sum(b)
    for k in range(bound + 1):
        level = twist + k
        for alpha in _window(chart, level, bound):
            for j in range(lattice.rank):
                elem = lattice.frame_element(alpha, j)
                image = lattice.apply_symbol_monomial(a, b, elem)
                if not image:
                    continue
                if k + d - 1 < 0:
                    return False
                if lattice.element_pole_order(image) > twist + k + d - 1:
                    return False
    return True


@dataclass(frozen=True)
class BackwardReport:
    pole_bound: int
    certified_rows: tuple
    regular: bool
    failing_entries: tuple

    @property
    def verdict(self) -> str:
        return REGULAR if self.regular else IRREGULAR

    def to_dict(self) -> dict:
        return {"pole_bound": self.pole_bound,
                "verdict": self.verdict,
                "certified": [r.description for r in self.certified_rows],
                "obstructions": list(self.failing_entries)}


def theorem_backward_extraction(data, pole_bound: int) -> BackwardReport:
    """Backward comparison at a curve point.

    The input lattice has theta-action entries with poles of order at most
    s = pole_bound, so x^(s+1) d stabilizes it (certified entrywise).  With
    radicality as the hypothesis, stability must already hold at s = 0: the
    verdict is read off the unweighted entry orders.
    """
    if isinstance(data, UnivarOperator):
        matrix = CyclicFiltration(data).theta_matrix
    else:
        matrix = [list(row) for row in data]
    rows = []
    failing = []
    regular = True
    for i, row in enumerate(matrix):
        for j, entry in enumerate(row):
            o = entry.ord_at(0)
            if o != INF and o < -pole_bound:
                raise ValueError(
                    f"entry ({i},{j}) = {entry} has pole order {-o} > {pole_bound}")
            shifted_ok = o == INF or o + pole_bound >= 0
            rows.append(ScanRow(
                f"x^{pole_bound}*T[{i}][{j}] is pole-free", shifted_ok))
            if o != INF and o < 0:
                regular = False
                failing.append(f"T[{i}][{j}] = {entry} has a pole")
    return BackwardReport(pole_bound, tuple(rows), regular, tuple(failing))
