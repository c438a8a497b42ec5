"""Connection-side regularity tests for univariate operators.

The Fuchs criterion reads the orders ord_0 b_i >= i - n directly off the
monic coefficients; the Euler-form criterion asks instead that the theta
coefficients of x^n P have no pole.  The two are compared as independent
routes in dmod; here each produces a self-contained certificate.  A Newton
polygon refines the verdict with slopes, and the projective-line report
aggregates per-point certificates including the chart at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .operators import ThetaOperator, UnivarOperator, chart_infinity, to_theta_form
from .polynomials import INF, MPoly, RatFun, as_rat, factor_rational


class _Infinity:
    """The point at infinity on the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "infinity"

    def __str__(self):
        return "inf"


INFINITY = _Infinity()

REGULAR = "regular"
IRREGULAR = "irregular"


def _localize(p: UnivarOperator, point) -> UnivarOperator:
    """Move the requested point to the origin (chart change at infinity)."""
    if p.is_zero():
        raise ValueError("zero operator")
    if point is INFINITY:
        return chart_infinity(p)
    return p.shift(as_rat(point))


@dataclass(frozen=True)
class FuchsRow:
    index: int
    order: int | float
    bound: int
    satisfied: bool


@dataclass(frozen=True)
class FuchsCertificate:
    point: object
    rows: tuple
    verdict: str

    @property
    def regular(self) -> bool:
        return self.verdict == REGULAR

    def to_dict(self) -> dict:
        return {
            "point": str(self.point),
            "verdict": self.verdict,
            "rows": [
                {"i": r.index,
                 "ord": "inf" if r.order == INF else int(r.order),
                 "bound": r.bound,
                 "ok": r.satisfied}
                for r in self.rows
            ],
        }


def fuchs_regular_at(p: UnivarOperator, point) -> FuchsCertificate:
    """Fuchs order test at a point of P^1: ord_0 b_i >= i - n after monic
    normalization and translation of the point to the origin."""
    local = _localize(p, point).monic()
    n = local.order()
    rows = []
    verdict = REGULAR
    for i in range(n):
        o = local.coeff(i).ord_at(0)
        bound = i - n
        ok = o >= bound
        if not ok:
            verdict = IRREGULAR
        rows.append(FuchsRow(i, o, bound, ok))
    return FuchsCertificate(point, tuple(rows), verdict)


def theta_regular_at_zero(p: UnivarOperator) -> tuple[bool, ThetaOperator]:
    """Euler-form test at 0: the theta coefficients of x^n P are pole-free
    and the top one is a unit at 0.  Returns (verdict, witness form)."""
    monic = p.monic()
    n = monic.order()
    theta = to_theta_form(monic)
    ok = True
    for i in range(n + 1):
        if theta.coeff(i).ord_at(0) < 0:
            ok = False
    if theta.coeff(n).ord_at(0) != 0:
        ok = False
    return ok, theta


@dataclass(frozen=True)
class NewtonPolygon:
    point: object
    points: tuple
    slopes: tuple

    def to_dict(self) -> dict:
        return {
            "point": str(self.point),
            "points": [list(q) for q in self.points],
            "slopes": [str(s) for s in self.slopes],
        }


def newton_polygon(p: UnivarOperator, point) -> NewtonPolygon:
    """Slopes of the coefficient-order polygon; {0} exactly on Fuchs-regular
    operators.  Plotted points are (i, i - ord b_i) for nonzero b_i."""
    local = _localize(p, point).monic()
    n = local.order()
    pts = []
    for i in range(n + 1):
        o = local.coeff(i).ord_at(0)
        if o == INF:
            continue
        pts.append((i, i - int(o)))
    hull = _upper_hull(pts)
    slopes = set()
    if len(hull) == 1:
        slopes.add(Fraction(0))
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = -Fraction(y2 - y1, x2 - x1)
        slopes.add(max(Fraction(0), s))
    return NewtonPolygon(point, tuple(pts), tuple(sorted(slopes)))


def _upper_hull(points: list[tuple]) -> list[tuple]:
    points = sorted(points)
    hull: list[tuple] = []
    for q in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep the boundary concave from above
            if (y2 - y1) * (q[0] - x1) <= (q[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(q)
    return hull


@dataclass(frozen=True)
class SingularPoint:
    """A tested or untested singular location on P^1."""

    location: object          # Fraction, INFINITY, or an untested MPoly factor
    tested: bool
    certificate: FuchsCertificate | None

    def to_dict(self) -> dict:
        if self.tested:
            return {"point": str(self.location), "tested": True,
                    "verdict": self.certificate.verdict,
                    "certificate": self.certificate.to_dict()}
        return {"point": str(self.location), "tested": False,
                "verdict": "requires extension field"}


GLOBAL_REGULAR = "regular"
GLOBAL_IRREGULAR = "irregular"
GLOBAL_REGULAR_TESTED = "regular over tested points"


@dataclass(frozen=True)
class ProjectiveLineReport:
    operator: UnivarOperator
    points: tuple
    verdict: str

    def to_dict(self) -> dict:
        return {"verdict": self.verdict,
                "points": [q.to_dict() for q in self.points]}


def singular_support(p: UnivarOperator) -> tuple[list[tuple[Fraction, int]], MPoly]:
    """Rational roots and untested factor of the cleared leading coefficient."""
    monic = p.monic()
    denlcm = MPoly.const((p.var,), 1)
    from .polynomials import univar_gcd
    for c in monic.coeffs:
        g = univar_gcd(denlcm, c.den)
        extra, _ = c.den.univar_divmod(g)
        denlcm = denlcm * extra
    if denlcm.total_degree() <= 0:
        return [], MPoly.const((p.var,), 1)
    return factor_rational(denlcm)


def regular_on_projective_line(p: UnivarOperator) -> ProjectiveLineReport:
    """Fuchs verdicts at every rational singular point and at infinity.

    Verdicts at roots of factors of degree > 1 are not computed (no
    algebraic extensions); such factors downgrade a clean global verdict to
    "regular over tested points", never to a silent pass.
    """
    if p.is_zero():
        raise ValueError("zero operator")
    roots, leftover = singular_support(p)
    entries = []
    all_regular = True
    for root, _mult in roots:
        cert = fuchs_regular_at(p, root)
        if not cert.regular:
            all_regular = False
        entries.append(SingularPoint(root, True, cert))
    cert_inf = fuchs_regular_at(p, INFINITY)
    if not cert_inf.regular:
        all_regular = False
    entries.append(SingularPoint(INFINITY, True, cert_inf))
    untested = leftover.total_degree() > 0
    if untested:
        entries.append(SingularPoint(leftover, False, None))
    if not all_regular:
        verdict = GLOBAL_IRREGULAR
    elif untested:
        verdict = GLOBAL_REGULAR_TESTED
    else:
        verdict = GLOBAL_REGULAR
    return ProjectiveLineReport(p, tuple(entries), verdict)
