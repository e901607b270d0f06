"""Rankin-Cohen type brackets, their star products and defect checks.

Three families:

* ``RC``   sum_r (-1)^r C(k+n-1, n-r) C(l+n-1, r) dtau^r f * dtau^(n-r) g
* ``RC_d`` the same with the derivation ``d = dtau + E1 dz / 4``
* ``TV``   sum_r (-1)^r C(n, r) dtau^(n-r) dz^r f * dtau^r dz^(n-r) g

RC and RC_d depend on the weights (k, l) and are extended bilinearly over
weight components. The TV star product carries 1/n!; the others use the
brackets as they stand.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .algebra import E1, ZERO, Form, weight_components
from .calculus import d_deriv, dtau, dz


def gen_binom(m: int, j: int) -> Fraction:
    """C(m, j) via the falling factorial; zero for j < 0 and for 0 <= m < j."""
    if j < 0:
        return Fraction(0)
    num = 1
    for i in range(j):
        num *= m - i
    return Fraction(num, math.factorial(j))


def _powers(D: Callable[[Form], Form], f: Form, n: int) -> List[Form]:
    out = [f]
    for _ in range(n):
        out.append(D(out[-1]) if out[-1] else ZERO)
    return out


def _rc_generic(D, n: int, f: Form, g: Form) -> Form:
    if n < 0:
        raise ValueError("bracket order must be nonnegative")
    total = ZERO
    fparts = weight_components(f)
    gparts = weight_components(g)
    gpows = {l: _powers(D, gl, n) for l, gl in gparts.items()}
    for k, fk in fparts.items():
        fpow = _powers(D, fk, n)
        for l, gpow in gpows.items():
            for r in range(n + 1):
                coeff = gen_binom(k + n - 1, n - r) * gen_binom(l + n - 1, r)
                if not coeff or not fpow[r] or not gpow[n - r]:
                    continue
                if r & 1:
                    coeff = -coeff
                total = total + (fpow[r] * gpow[n - r]) * coeff
    return total


def rc_bracket(n: int, f: Form, g: Form) -> Form:
    return _rc_generic(dtau, n, f, g)


def rc_d_bracket(n: int, f: Form, g: Form) -> Form:
    return _rc_generic(d_deriv, n, f, g)


def _mixed_powers(f: Form, n: int) -> Dict[Tuple[int, int], Form]:
    """dtau^a dz^b f for a + b <= n (the two derivations commute)."""
    table: Dict[Tuple[int, int], Form] = {}
    col = f
    for b in range(n + 1):
        row = col
        for a in range(n + 1 - b):
            table[(a, b)] = row
            if a < n - b:
                row = dtau(row) if row else ZERO
        if b < n:
            col = dz(col) if col else ZERO
    return table


def transvectant(n: int, f: Form, g: Form) -> Form:
    if n < 0:
        raise ValueError("bracket order must be nonnegative")
    if n == 0:
        return f * g
    ft = _mixed_powers(f, n)
    gt = _mixed_powers(g, n)
    total = ZERO
    for r in range(n + 1):
        a, b = ft[(n - r, r)], gt[(r, n - r)]
        if not a or not b:
            continue
        coeff = math.comb(n, r) * (-1 if r & 1 else 1)
        total = total + (a * b) * coeff
    return total


class BracketFamily(str, enum.Enum):
    RC = "RC"
    RC_d = "RC_d"
    TV = "TV"

    @classmethod
    def parse(cls, name) -> "BracketFamily":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "_")
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(f"unknown bracket family {name!r}; expected RC, RC_d or TV")

    @property
    def bracket(self) -> Callable[[int, Form, Form], Form]:
        return {BracketFamily.RC: rc_bracket, BracketFamily.RC_d: rc_d_bracket, BracketFamily.TV: transvectant}[self]

    @property
    def derivations(self) -> Tuple[str, ...]:
        return {BracketFamily.RC: ("dtau",), BracketFamily.RC_d: ("d",), BracketFamily.TV: ("dtau", "dz")}[self]

    def star_coefficient(self, n: int) -> Fraction:
        """Weight of the n-th bracket in the star product."""
        return Fraction(1, math.factorial(n)) if self is BracketFamily.TV else Fraction(1)

    def star_term(self, n: int, f: Form, g: Form) -> Form:
        out = self.bracket(n, f, g)
        c = self.star_coefficient(n)
        return out if c == 1 else out * c


StarSeries = List[Form]


def star_truncated(order: int, f: Form, g: Form, family=BracketFamily.TV) -> StarSeries:
    """Coefficients of hbar^0 .. hbar^order of f * g."""
    fam = BracketFamily.parse(family)
    return [fam.star_term(n, f, g) for n in range(order + 1)]


def _star_series(fam: BracketFamily, a: StarSeries, b: StarSeries, order: int) -> StarSeries:
    out = []
    for n in range(order + 1):
        acc = ZERO
        for i in range(n + 1):
            for j in range(n - i + 1):
                m = n - i - j
                if a[i] and b[j]:
                    acc = acc + fam.star_term(m, a[i], b[j])
        out.append(acc)
    return out


def associativity_defect(order: int, f: Form, g: Form, h: Form, family=BracketFamily.TV) -> StarSeries:
    """Per-order coefficients of (f*g)*h - f*(g*h); all zero for an associative star."""
    fam = BracketFamily.parse(family)
    fg = star_truncated(order, f, g, fam)
    gh = star_truncated(order, g, h, fam)
    pad = [ZERO] * order
    left = _star_series(fam, fg, [h] + pad, order)
    right = _star_series(fam, [f] + pad, gh, order)
    return [l - r for l, r in zip(left, right)]


def tv_recurrence_defect(n: int, f: Form, g: Form) -> Form:
    """{f,g}_{n+1} - ({dtau f, dz g}_n - {dz f, dtau g}_n)."""
    return transvectant(n + 1, f, g) - (transvectant(n, dtau(f), dz(g)) - transvectant(n, dz(f), dtau(g)))


def e1_exchange_defect(n: int, f: Form, g: Form) -> Form:
    """Left minus right of the E1-exchange identity for the transvectants."""
    if n < 1:
        raise ValueError("the E1-exchange identity needs n >= 1")
    sign = -1 if (n - 1) & 1 else 1
    lhs = transvectant(n, f * E1, g) - transvectant(n, f, g * E1)
    rhs = f * transvectant(n, E1, g) + sign * g * transvectant(n, E1, f)
    for i in range(1, n):
        inner = transvectant(n - i, transvectant(i, f, E1), g) + sign * transvectant(n - i, transvectant(i, g, E1), f)
        rhs = rhs - math.comb(n, i) * inner
    return lhs - rhs
