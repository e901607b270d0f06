"""Dimensions of the weight-k pieces of the four polynomial subalgebras.

Routes, kept independent of each other:

* enumeration: count exponent vectors with the right weight;
* series: coefficients of 1 / prod(1 - z^w) by integer convolution;
* quasi-polynomial closed forms, evaluated exactly (Gaussian and
  Eisenstein rationals for the i^k and j^k terms);
* for JS, the quadratic nearest-integer formula, two recurrences, the
  modular-forms sum and Alcuin's triangle count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import GENERATOR_WEIGHTS, Subalgebra

AlgebraId = Subalgebra


def generator_weights(which) -> Tuple[int, ...]:
    return tuple(sorted(GENERATOR_WEIGHTS[i] for i in Subalgebra.parse(which).generators))


def nearest_int(x: Fraction) -> int:
    """Nearest integer with halves rounded down."""
    return math.ceil(Fraction(x) - Fraction(1, 2))


# --- enumeration and series --------------------------------------------------

def dims_by_enumeration(which, k: int) -> int:
    """Number of exponent vectors of weight k on the algebra's generators."""
    if k < 0:
        return 0
    ws = sorted(generator_weights(which), reverse=True)

    def count(pos: int, rem: int) -> int:
        w = ws[pos]
        if pos == len(ws) - 1:
            return 1 if rem % w == 0 else 0
        return sum(count(pos + 1, rem - e * w) for e in range(rem // w + 1))

    return count(0, k)


def dims_by_series(which, kmax: int) -> List[int]:
    """Coefficients 0..kmax of 1 / prod(1 - z^w) over the generator weights."""
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    coeffs = [1] + [0] * kmax
    for w in generator_weights(which):
        for n in range(w, kmax + 1):
            coeffs[n] += coeffs[n - w]
    return coeffs


# --- quasi-polynomial closed forms -------------------------------------------

class _Gauss:
    """a + b*i with rational a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a, self.b = Fraction(a), Fraction(b)

    def __add__(self, o):
        o = o if isinstance(o, _Gauss) else _Gauss(o)
        return _Gauss(self.a + o.a, self.b + o.b)

    def __mul__(self, o):
        o = o if isinstance(o, _Gauss) else _Gauss(o)
        return _Gauss(self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a)

    __radd__ = __add__
    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = _Gauss(1)
        for _ in range(n):
            out = out * self
        return out


class _Eis:
    """a + b*j with rational a, b and j^2 = -1 - j."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a, self.b = Fraction(a), Fraction(b)

    def __add__(self, o):
        o = o if isinstance(o, _Eis) else _Eis(o)
        return _Eis(self.a + o.a, self.b + o.b)

    def __mul__(self, o):
        o = o if isinstance(o, _Eis) else _Eis(o)
        bb = self.b * o.b
        return _Eis(self.a * o.a - bb, self.a * o.b + self.b * o.a - bb)

    __radd__ = __add__
    __rmul__ = __mul__


_I = _Gauss(0, 1)
_J = _Eis(0, 1)


def _i_pow(k: int) -> _Gauss:
    return _I ** (k % 4)


def _j_pow(k: int) -> _Eis:
    out = _Eis(1)
    for _ in range(k % 3):
        out = out * _J
    return out


def _closed_parts(which: Subalgebra, k: int) -> Tuple[Fraction, _Gauss, _Eis]:
    F = Fraction
    s = -1 if k % 2 else 1
    P = F(1 + s, 2)
    I = F(1 - s, 2)
    ik, jk, j2k = _i_pow(k), _j_pow(k), _j_pow(2 * k)
    if which is Subalgebra.JS:
        poly = F(107, 288) + F(3, 16) * k + F(1, 48) * k**2 + F(9, 32) * s + F(1, 16) * s * k
        gauss = F(1, 8) * (_Gauss(P, I) * ik)
        eis = F(1, 9) * (jk + j2k)
    elif which is Subalgebra.JS0inf:
        poly = F(175, 288) + F(15, 32) * k + F(5, 48) * k**2 + F(1, 144) * k**3 + F(5, 32) * s + F(1, 32) * s * k
        gauss = F(1, 8) * P * ik
        eis = F(1, 27) * ((_Eis(1) + _Eis(0, -1)) * jk) + F(1, 27) * ((_Eis(2) + _J) * j2k)
    elif which is Subalgebra.JSinf0:
        poly = (F(121, 288) + F(55, 192) * k + F(11, 192) * k**2 + F(1, 288) * k**3
                + F(13, 32) * s + F(11, 64) * s * k + F(1, 64) * s * k**2)
        gauss = F(1, 16) * (_Gauss(P, I) * ik)
        eis = F(1, 27) * ((_Eis(2) + _J) * jk) + F(1, 27) * ((_Eis(1) + _Eis(0, -1)) * j2k)
    else:
        poly = (F(4267, 6912) + F(55, 96) * k + F(199, 1152) * k**2 + F(1, 48) * k**3 + F(1, 1152) * k**4
                + F(63, 256) * s + F(3, 32) * s * k + F(1, 128) * s * k**2)
        gauss = F(1, 16) * P * ik
        eis = F(1, 27) * (jk + j2k)
    return poly, gauss, eis


def dims_closed_form(which, k: int) -> int:
    """Quasi-polynomial closed form, exact.

    The i- and j-parts are checked to be rational before summing; a nonzero
    irrational part or a non-integer total raises ArithmeticError.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    which = Subalgebra.parse(which)
    poly, gauss, eis = _closed_parts(which, k)
    if gauss.b != 0 or eis.b != 0:
        raise ArithmeticError(f"irrational residue in closed form for {which.value}, k={k}")
    total = poly + gauss.a + eis.a
    if total.denominator != 1:
        raise ArithmeticError(f"closed form for {which.value}, k={k} is not an integer: {total}")
    return int(total)


def ds_closed(k: int) -> int:
    """Nearest integer to (k + 3 eta)^2 / 48, eta = 1 for odd k and 2 for even k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    eta = 1 if k % 2 else 2
    return nearest_int(Fraction((k + 3 * eta) ** 2, 48))


def modular_dim(j: int) -> int:
    """Dimension of weight-j modular forms, extended to all integers by the same formula."""
    return j // 12 + (0 if (j - 2) % 12 == 0 else 1)


def ds_via_modular(k: int) -> int:
    """Sum of modular_dim(2k - 8c) over 0 <= c <= k/4."""
    return sum(modular_dim(2 * k - 8 * c) for c in range(k // 4 + 1))


def ds_recurrences_check(kmax: int) -> bool:
    """d(2k+3) = d(2k) and d(2k+13) = d(2k+1) + k + 5 for every k they cover up to kmax."""
    d = dims_by_series(Subalgebra.JS, kmax + 13)
    for k in range(0, kmax // 2 + 1):
        if d[2 * k + 3] != d[2 * k]:
            return False
        if d[2 * k + 13] != d[2 * k + 1] + k + 5:
            return False
    return True


# --- Alcuin's sequence -------------------------------------------------------

def alcuin(n: int) -> int:
    """Number of incongruent integer triangles with perimeter n."""
    count = 0
    for a in range(1, n // 3 + 1):
        for b in range(a, (n - a) // 2 + 1):
            c = n - a - b
            if c >= b and a + b > c:
                count += 1
    return count


def alcuin_series(nmax: int) -> List[int]:
    """Coefficients of z^3 / ((1 - z^2)(1 - z^3)(1 - z^4))."""
    base = dims_by_series(Subalgebra.JS, max(nmax - 3, 0))
    return [0, 0, 0] + base[: max(nmax - 2, 0)] if nmax >= 3 else [0] * (nmax + 1)


def ds_vs_alcuin_check(kmax: int) -> bool:
    d = dims_by_series(Subalgebra.JS, kmax)
    t = alcuin_series(kmax + 3)
    return all(d[k] == t[k + 3] == alcuin(k + 3) for k in range(kmax + 1))


# --- compact cubic formulas --------------------------------------------------

def compact_cubic(k: int) -> int:
    tail = 72 * k + 144 if k % 2 == 0 else 63 * k + 65
    return nearest_int(Fraction(k**3 + 15 * k**2 + tail, 144))


def compact_factored(k: int) -> int:
    quad = (k + 6) ** 2 if k % 2 == 0 else (k + 3) * (k + 9)
    return nearest_int(Fraction((k + 3) * quad, 144))


def compact_formula_check(kmax: int) -> bool:
    """Both compact formulas for the E1-extended algebra agree with enumeration."""
    return all(
        compact_cubic(k) == compact_factored(k) == dims_by_enumeration(Subalgebra.JS0inf, k)
        for k in range(kmax + 1)
    )


# --- reports -----------------------------------------------------------------

@dataclass(frozen=True)
class DimensionReport:
    which: Subalgebra
    k: int
    enumeration: int
    series: int
    closed: int
    extra: Dict[str, int] = field(default_factory=dict)

    @property
    def values(self) -> Dict[str, int]:
        return {"enumeration": self.enumeration, "series": self.series, "closed": self.closed, **self.extra}

    @property
    def agree(self) -> bool:
        return len(set(self.values.values())) == 1


def dimension_reports(which, kmax: int, series: Optional[List[int]] = None) -> List[DimensionReport]:
    which = Subalgebra.parse(which)
    series = series or dims_by_series(which, kmax)
    out = []
    for k in range(kmax + 1):
        extra = {}
        if which is Subalgebra.JS:
            extra = {"quadratic": ds_closed(k), "modular_sum": ds_via_modular(k), "alcuin": alcuin(k + 3)}
        elif which is Subalgebra.JS0inf:
            extra = {"compact_cubic": compact_cubic(k), "compact_factored": compact_factored(k)}
        out.append(DimensionReport(which, k, dims_by_enumeration(which, k), series[k], dims_closed_form(which, k), extra))
    return out
