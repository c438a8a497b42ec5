"""The Weyl algebra A_n over Q in normal-ordered canonical form.

Elements are finite sums c * x^alpha * d^beta with all x's to the left of
all d's; multiplication normal-orders immediately through the closed form

    d^a x^b = sum_k k! C(a,k) C(b,k) x^(b-k) d^(a-k)

so equality of elements is equality of term maps.  The left Gröbner engine
uses a term order that compares total d-degree first, which makes principal
symbols of a basis generate a well-defined graded ideal in Q[x, xi].
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ideals import BudgetExceeded, DEFAULT_BUDGET, Ideal
from .polynomials import MPoly, as_rat, format_mpoly

_COORD_NAMES = ("x", "y", "z")
_SYMBOL_NAMES = ("xi", "eta", "zeta")
_DERIV_NAMES = ("dx", "dy", "dz")


def coordinate_names(n: int) -> tuple:
    if n <= 3:
        return _COORD_NAMES[:n]
    return tuple(f"x{i+1}" for i in range(n))


def symbol_names(n: int) -> tuple:
    if n <= 3:
        return _SYMBOL_NAMES[:n]
    return tuple(f"xi{i+1}" for i in range(n))


def deriv_names(n: int) -> tuple:
    if n == 1:
        return ("d",)
    if n <= 3:
        return _DERIV_NAMES[:n]
    return tuple(f"d{i+1}" for i in range(n))


class WeylElement:
    """A normal-ordered element of A_n; terms map (alpha, beta) to Q*."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple, Fraction] | None = None):
        if n < 1:
            raise ValueError("A_n needs n >= 1")
        self.n = n
        clean: dict[tuple, Fraction] = {}
        if terms:
            for key, coeff in terms.items():
                alpha, beta = key
                if len(alpha) != n or len(beta) != n:
                    raise ValueError(f"multi-index {key} has wrong length for A_{n}")
                c = as_rat(coeff)
                if c:
                    clean[(tuple(alpha), tuple(beta))] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "WeylElement":
        return cls(n, {})

    @classmethod
    def const(cls, n: int, value) -> "WeylElement":
        z = (0,) * n
        return cls(n, {(z, z): as_rat(value)})

    @classmethod
    def x(cls, n: int, i: int, power: int = 1) -> "WeylElement":
        alpha = tuple(power if j == i else 0 for j in range(n))
        return cls(n, {(alpha, (0,) * n): Fraction(1)})

    @classmethod
    def d(cls, n: int, i: int, power: int = 1) -> "WeylElement":
        beta = tuple(power if j == i else 0 for j in range(n))
        return cls(n, {((0,) * n, beta): Fraction(1)})

    @classmethod
    def from_poly(cls, p: MPoly) -> "WeylElement":
        """Inject a polynomial in the coordinates as a pure-x element."""
        n = len(p.vars)
        zero = (0,) * n
        return cls(n, {(e, zero): c for e, c in p.terms.items()})

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def order(self) -> int | float:
        """Maximal total d-degree (the order filtration level)."""
        if not self.terms:
            return -math.inf
        return max(sum(beta) for _, beta in self.terms)

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "WeylElement") -> None:
        if self.n != other.n:
            raise ValueError("elements of different Weyl algebras")

    def __add__(self, other: "WeylElement") -> "WeylElement":
        self._check(other)
        res = dict(self.terms)
        for key, c in other.terms.items():
            s = res.get(key, Fraction(0)) + c
            if s:
                res[key] = s
            else:
                res.pop(key, None)
        out = WeylElement.__new__(WeylElement)
        out.n = self.n
        out.terms = res
        return out

    def __neg__(self) -> "WeylElement":
        out = WeylElement.__new__(WeylElement)
        out.n = self.n
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other: "WeylElement") -> "WeylElement":
        return self + (-other)

    def scale(self, c) -> "WeylElement":
        c = as_rat(c)
        if not c:
            return WeylElement.zero(self.n)
        out = WeylElement.__new__(WeylElement)
        out.n = self.n
        out.terms = {k: c * v for k, v in self.terms.items()}
        return out

    def __mul__(self, other) -> "WeylElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return weyl_mul(self, other)

    def __rmul__(self, other) -> "WeylElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "WeylElement":
        if k < 0:
            raise ValueError("negative power in the Weyl algebra")
        result = WeylElement.const(self.n, 1)
        for _ in range(k):
            result = weyl_mul(result, self)
        return result

    # -- symbol and action -----------------------------------------------------

    def principal_symbol(self, variables: Sequence[str] | None = None) -> MPoly:
        """Image of the top-order part in Gr A_n = Q[x, xi]."""
        if self.is_zero():
            raise ValueError("no symbol of zero")
        top = self.order()
        if variables is None:
            variables = coordinate_names(self.n) + symbol_names(self.n)
        variables = tuple(variables)
        if len(variables) != 2 * self.n:
            raise ValueError("need one coordinate and one symbol name per variable")
        terms = {}
        for (alpha, beta), c in self.terms.items():
            if sum(beta) == top:
                terms[alpha + beta] = c
        return MPoly(variables, terms)

    def apply(self, p: MPoly) -> MPoly:
        """Act on a polynomial in the coordinates."""
        if len(p.vars) != self.n:
            raise ValueError("polynomial has wrong number of variables")
        result = MPoly.zero(p.vars)
        for (alpha, beta), c in self.terms.items():
            q = p
            for i, b in enumerate(beta):
                for _ in range(b):
                    q = q.diff(p.vars[i])
                    if q.is_zero():
                        break
            if q.is_zero():
                continue
            result = result + MPoly.monomial(p.vars, alpha, c) * q
        return result

    def __str__(self) -> str:
        return format_weyl(self)

    def __repr__(self) -> str:
        return f"WeylElement({format_weyl(self)!r})"


def _binom(a: int, k: int) -> int:
    return math.comb(a, k)


def weyl_mul(a: WeylElement, b: WeylElement) -> WeylElement:
    """Normal-ordered product in A_n."""
    a._check(b)
    n = a.n
    res: dict[tuple, Fraction] = {}
    for (alpha, beta), ca in a.terms.items():
        for (gamma, delta), cb in b.terms.items():
            base = ca * cb
            # distribute the per-variable contraction d^beta_i x^gamma_i
            stack = [((), Fraction(1))]
            for i in range(n):
                top = min(beta[i], gamma[i])
                new_stack = []
                for ks, coeff in stack:
                    for k in range(top + 1):
                        factor = Fraction(math.factorial(k) * _binom(beta[i], k) * _binom(gamma[i], k))
                        new_stack.append((ks + (k,), coeff * factor))
                stack = new_stack
            for ks, coeff in stack:
                exp_x = tuple(alpha[i] + gamma[i] - ks[i] for i in range(n))
                exp_d = tuple(beta[i] + delta[i] - ks[i] for i in range(n))
                key = (exp_x, exp_d)
                s = res.get(key, Fraction(0)) + base * coeff
                if s:
                    res[key] = s
                else:
                    res.pop(key, None)
    out = WeylElement.__new__(WeylElement)
    out.n = n
    out.terms = res
    return out


# -- printing ---------------------------------------------------------------


def format_weyl(w: WeylElement,
                coord: Sequence[str] | None = None,
                deriv: Sequence[str] | None = None) -> str:
    if w.is_zero():
        return "0"
    coord = tuple(coord) if coord else coordinate_names(w.n)
    deriv = tuple(deriv) if deriv else deriv_names(w.n)
    items = sorted(w.terms.items(), key=lambda kv: _order_key(kv[0]), reverse=True)
    parts = []
    for (alpha, beta), c in items:
        factors = []
        for name, e in zip(coord, alpha):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        for name, e in zip(deriv, beta):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        elif mag == 1:
            body = "*".join(factors)
        else:
            mags = str(mag) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            body = "*".join([mags] + factors)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


# -- left Gröbner bases -------------------------------------------------------


def _order_key(key: tuple) -> tuple:
    """Filtration-compatible term order: total d-degree, then degrevlex."""
    alpha, beta = key
    joint = alpha + beta
    return (sum(beta), sum(joint), tuple(-e for e in reversed(joint)))


def _leading(w: WeylElement) -> tuple[tuple, Fraction]:
    key = max(w.terms, key=_order_key)
    return key, w.terms[key]


def _mono_divides(a: tuple, b: tuple) -> bool:
    (aa, ad), (ba, bd) = a, b
    return all(x <= y for x, y in zip(aa, ba)) and all(x <= y for x, y in zip(ad, bd))


def _mono_element(n: int, alpha: tuple, beta: tuple, c: Fraction) -> WeylElement:
    return WeylElement(n, {(alpha, beta): c})


def weyl_normal_form(f: WeylElement, basis: Sequence[WeylElement]) -> WeylElement:
    """Full left-division remainder of f by the basis."""
    if not basis:
        return f
    lead = [_leading(g) for g in basis]
    remainder = WeylElement.zero(f.n)
    work = f
    while not work.is_zero():
        key, c = _leading(work)
        for g, (gkey, gc) in zip(basis, lead):
            if _mono_divides(gkey, key):
                (ga, gd), (ka, kd) = gkey, key
                mult = _mono_element(
                    f.n,
                    tuple(x - y for x, y in zip(ka, ga)),
                    tuple(x - y for x, y in zip(kd, gd)),
                    c / gc,
                )
                work = work - weyl_mul(mult, g)
                break
        else:
            mono = _mono_element(f.n, key[0], key[1], c)
            remainder = remainder + mono
            work = work - mono
    return remainder


def weyl_groebner(gens: Iterable[WeylElement],
                  budget: int = DEFAULT_BUDGET) -> list[WeylElement]:
    """Reduced left Gröbner basis of the left ideal sum A_n * g.

    No coprimality shortcut is applied: in A_n commutators of elements with
    disjoint leading supports need not vanish, so every S-pair is processed.
    """
    basis = [g for g in gens if not g.is_zero()]
    if not basis:
        return []
    n = basis[0].n
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    processed = 0
    while pairs:
        processed += 1
        if processed > budget:
            raise BudgetExceeded(f"Weyl Gröbner budget of {budget} S-pairs exceeded")
        i, j = pairs.pop(0)
        (fa, fd), fc = _leading(basis[i])
        (ga, gd), gc = _leading(basis[j])
        la = tuple(max(x, y) for x, y in zip(fa, ga))
        ld = tuple(max(x, y) for x, y in zip(fd, gd))
        mi = _mono_element(n, tuple(x - y for x, y in zip(la, fa)),
                           tuple(x - y for x, y in zip(ld, fd)), Fraction(1) / fc)
        mj = _mono_element(n, tuple(x - y for x, y in zip(la, ga)),
                           tuple(x - y for x, y in zip(ld, gd)), Fraction(1) / gc)
        s = weyl_mul(mi, basis[i]) - weyl_mul(mj, basis[j])
        r = weyl_normal_form(s, basis)
        if not r.is_zero():
            basis.append(r)
            k = len(basis) - 1
            pairs.extend((t, k) for t in range(k))
    return _reduce_weyl_basis(basis)


def _reduce_weyl_basis(basis: list[WeylElement]) -> list[WeylElement]:
    lead = [_leading(g)[0] for g in basis]
    keep = []
    for i, e in enumerate(lead):
        if any(j != i and _mono_divides(lead[j], e) and (lead[j] != e or j < i)
               for j in range(len(basis))):
            continue
        keep.append(i)
    minimal = [basis[i] for i in keep]
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r = weyl_normal_form(g, others) if others else g
        if r.is_zero():
            continue
        _, lc = _leading(r)
        reduced.append(r.scale(Fraction(1) / lc))
    reduced.sort(key=lambda g: _order_key(_leading(g)[0]))
    return reduced


def characteristic_ideal(gens: Iterable[WeylElement],
                         variables: Sequence[str] | None = None,
                         budget: int = DEFAULT_BUDGET) -> Ideal:
    """Ideal of principal symbols of a left Gröbner basis of the input."""
    gens = list(gens)
    if not gens:
        raise ValueError("characteristic ideal of the empty generator list")
    n = gens[0].n
    gb = weyl_groebner(gens, budget)
    if variables is None:
        variables = coordinate_names(n) + symbol_names(n)
    symbols = [g.principal_symbol(variables) for g in gb]
    return Ideal(tuple(variables), symbols)
