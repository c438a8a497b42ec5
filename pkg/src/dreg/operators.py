"""Univariate differential operators with rational-function coefficients.

An operator P = sum b_i(x) d^i supports exact noncommutative products via
the Leibniz rule, monic normalization over Q(x), translation and
infinity-chart changes, and the two-way conversion with Euler form

    x^n P = sum a_i(x) theta^i,   theta = x d,

computed through signed Stirling numbers of the first kind (and inverted
with the second kind).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .polynomials import INF, MPoly, RatFun, as_rat, univar_gcd
from .weyl import WeylElement


class UnivarOperator:
    """P = sum_{i<=n} b_i(x) d^i with b_n != 0 (unless P = 0)."""

    __slots__ = ("var", "coeffs")

    def __init__(self, var: str, coeffs: Sequence[RatFun]):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        for c in coeffs:
            if c.var != var:
                raise ValueError("coefficient variable mismatch")
        self.var = var
        self.coeffs = tuple(coeffs)

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, var: str) -> "UnivarOperator":
        return cls(var, [])

    @classmethod
    def from_entries(cls, var: str, entries: Sequence) -> "UnivarOperator":
        out = []
        for e in entries:
            if isinstance(e, RatFun):
                out.append(e)
            elif isinstance(e, MPoly):
                out.append(RatFun(e))
            else:
                out.append(RatFun.const(var, e))
        return cls(var, out)

    @classmethod
    def derivation(cls, var: str) -> "UnivarOperator":
        return cls(var, [RatFun.zero(var), RatFun.const(var, 1)])

    @classmethod
    def multiplication(cls, f: RatFun) -> "UnivarOperator":
        return cls(f.var, [f])

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def order(self) -> int:
        if not self.coeffs:
            raise ValueError("the zero operator has no order")
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> RatFun:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return RatFun.zero(self.var)

    def leading_coeff(self) -> RatFun:
        if not self.coeffs:
            raise ValueError("zero operator")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == RatFun.const(self.var, 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnivarOperator):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, self.coeffs))

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "UnivarOperator") -> "UnivarOperator":
        m = max(len(self.coeffs), len(other.coeffs))
        return UnivarOperator(self.var, [self.coeff(i) + other.coeff(i) for i in range(m)])

    def __neg__(self) -> "UnivarOperator":
        return UnivarOperator(self.var, [-c for c in self.coeffs])

    def __sub__(self, other: "UnivarOperator") -> "UnivarOperator":
        return self + (-other)

    def scale(self, f) -> "UnivarOperator":
        """Left multiplication by a function of x."""
        if not isinstance(f, RatFun):
            f = RatFun.const(self.var, f)
        return UnivarOperator(self.var, [f * c for c in self.coeffs])

    def mul(self, other: "UnivarOperator") -> "UnivarOperator":
        """Operator composition self . other, expanded by Leibniz."""
        if self.var != other.var:
            raise ValueError("operators in different variables")
        n = (len(self.coeffs) - 1) + (len(other.coeffs) - 1)
        out = [RatFun.zero(self.var) for _ in range(max(n + 1, 0))]
        for i, bi in enumerate(self.coeffs):
            if bi.is_zero():
                continue
            for j, cj in enumerate(other.coeffs):
                if cj.is_zero():
                    continue
                # d^i (c_j d^j) = sum_k C(i,k) c_j^(k) d^(i+j-k)
                deriv = cj
                for k in range(i + 1):
                    if not deriv.is_zero():
                        out[i + j - k] = out[i + j - k] + bi * Fraction(math.comb(i, k)) * deriv
                    deriv = deriv.derivative()
        return UnivarOperator(self.var, out)

    def __mul__(self, other):
        if isinstance(other, UnivarOperator):
            return self.mul(other)
        if isinstance(other, (int, Fraction, RatFun)):
            # multiplication by a function from the right is an operator product
            return self.mul(UnivarOperator.multiplication(
                other if isinstance(other, RatFun) else RatFun.const(self.var, other)))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, RatFun)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "UnivarOperator":
        result = UnivarOperator.from_entries(self.var, [1])
        for _ in range(k):
            result = result.mul(self)
        return result

    def monic(self) -> "UnivarOperator":
        """Divide by the leading coefficient over Q(x)."""
        lead = self.leading_coeff()
        return UnivarOperator(self.var, [c / lead for c in self.coeffs])

    def apply(self, f: RatFun) -> RatFun:
        """Act on a rational function."""
        total = RatFun.zero(self.var)
        deriv = f
        for c in self.coeffs:
            if not c.is_zero():
                total = total + c * deriv
            deriv = deriv.derivative()
        return total

    # -- coordinate changes ------------------------------------------------------

    def shift(self, c) -> "UnivarOperator":
        """Translate the point c to the origin: substitute x -> x + c."""
        return UnivarOperator(self.var, [b.shift(c) for b in self.coeffs])

    def scale_var(self, c) -> "UnivarOperator":
        """Substitute x -> c*x (so d -> d/c) for nonzero rational c."""
        c = as_rat(c)
        return UnivarOperator(
            self.var,
            [b.scale_var(c) / (c ** i) for i, b in enumerate(self.coeffs)])

    def at_infinity(self, new_var: str = "t") -> "UnivarOperator":
        """Image under x = 1/t, d_x = -t^2 d_t.

        Coefficients stay rational functions; denominators are not cleared
        here (clearing happens in the Weyl-element conversion, which records
        the cleared factor).
        """
        if new_var == self.var:
            new_var = "t" if self.var != "t" else "s"
        n = self.order()
        # (-t^2 d_t)^i expanded once as polynomial-coefficient operators
        t2d = UnivarOperator.from_entries(new_var, [RatFun.zero(new_var),
                                                    -RatFun.x(new_var) ** 2])
        powers = [UnivarOperator.from_entries(new_var, [1])]
        for _ in range(n):
            powers.append(powers[-1].mul(t2d))
        total = UnivarOperator.zero(new_var)
        for i, b in enumerate(self.coeffs):
            if b.is_zero():
                continue
            total = total + powers[i].scale(b.invert_var(new_var))
        return total

    def rename_var(self, new_var: str) -> "UnivarOperator":
        return UnivarOperator(new_var, [c.rename_var(new_var) for c in self.coeffs])

    # -- conversions ----------------------------------------------------------------

    def to_weyl(self) -> tuple[WeylElement, MPoly]:
        """Clear denominators on the left; return (element, cleared factor).

        The returned WeylElement equals cleared * P, with the monic cleared
        polynomial retained for order bookkeeping at singular points.
        """
        if self.is_zero():
            return WeylElement.zero(1), MPoly.const((self.var,), 1)
        cleared = MPoly.const((self.var,), 1)
        for c in self.coeffs:
            g = univar_gcd(cleared, c.den)
            extra, _ = c.den.univar_divmod(g)
            cleared = cleared * extra
        cleared = cleared.monic_univar()
        terms: dict[tuple, Fraction] = {}
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            num = c.num * cleared.univar_divmod(c.den)[0]
            for (e,), coeff in num.terms.items():
                key = ((e,), (i,))
                terms[key] = terms.get(key, Fraction(0)) + coeff
        return WeylElement(1, terms), cleared

    def __str__(self) -> str:
        from .parser import format_operator
        return format_operator(self)

    def __repr__(self) -> str:
        return f"UnivarOperator({self!s})"


class ThetaOperator:
    """Euler form sum a_i(x) theta^i with theta = x d."""

    __slots__ = ("var", "coeffs")

    def __init__(self, var: str, coeffs: Sequence[RatFun]):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.var = var
        self.coeffs = tuple(coeffs)

    def order(self) -> int:
        if not self.coeffs:
            raise ValueError("zero theta operator")
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> RatFun:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return RatFun.zero(self.var)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ThetaOperator):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if i == 0:
                parts.append(f"({c})")
            elif i == 1:
                parts.append(f"({c})*theta")
            else:
                parts.append(f"({c})*theta^{i}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"ThetaOperator({self!s})"


@lru_cache(maxsize=None)
def stirling_first_signed(n: int, k: int) -> int:
    """Signed Stirling numbers of the first kind: falling factorial expansion."""
    if n == k == 0:
        return 1
    if n == 0 or k == 0 or k > n:
        return 0
    return stirling_first_signed(n - 1, k - 1) - (n - 1) * stirling_first_signed(n - 1, k)


@lru_cache(maxsize=None)
def stirling_second(n: int, k: int) -> int:
    """Stirling numbers of the second kind: theta^n = sum S(n,k) x^k d^k."""
    if n == k == 0:
        return 1
    if n == 0 or k == 0 or k > n:
        return 0
    return stirling_second(n - 1, k - 1) + k * stirling_second(n - 1, k)


def to_theta_form(p: UnivarOperator) -> ThetaOperator:
    """Euler form of x^n P: coefficients a_i = sum_k b_k x^(n-k) s(k,i)."""
    if p.is_zero():
        raise ValueError("zero operator has no theta form")
    n = p.order()
    var = p.var
    x = RatFun.x(var)
    out = [RatFun.zero(var) for _ in range(n + 1)]
    for k in range(n + 1):
        b = p.coeff(k)
        if b.is_zero():
            continue
        scaled = b * x ** (n - k)
        for i in range(k + 1):
            s = stirling_first_signed(k, i)
            if s:
                out[i] = out[i] + scaled * Fraction(s)
    return ThetaOperator(var, out)


def from_theta_form(t: ThetaOperator) -> UnivarOperator:
    """Inverse conversion: collapse theta powers back to x^k d^k."""
    if not t.coeffs:
        return UnivarOperator.zero(t.var)
    n = t.order()
    var = t.var
    x = RatFun.x(var)
    out = [RatFun.zero(var) for _ in range(n + 1)]
    for i in range(n + 1):
        a = t.coeff(i)
        if a.is_zero():
            continue
        for k in range(i + 1):
            s = stirling_second(i, k)
            if s:
                out[k] = out[k] + a * Fraction(s) * x ** k
    return UnivarOperator(var, out)


def chart_translate(p: UnivarOperator, c) -> UnivarOperator:
    """Operator in the local coordinate at c (the point moves to 0)."""
    return p.shift(c)


def chart_infinity(p: UnivarOperator, new_var: str = "t") -> UnivarOperator:
    """Operator in the coordinate t = 1/x at infinity."""
    return p.at_infinity(new_var)
