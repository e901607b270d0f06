"""Derivations on forms and the Eisenstein recursion.

Every derivation is a Leibniz extension of a table of generator images,
optionally plus a weight term ``k * W * f`` on each weight-k component
(``W`` a fixed form). The weight term is itself a derivation because
weights add under multiplication.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence

from . import kernels
from .algebra import (
    E1,
    E2,
    E4,
    GENERATOR_WEIGHTS,
    GENERATORS,
    ONE,
    P,
    PZ,
    ZERO,
    Form,
    Scalar,
    e6,
    linear_combination,
    weight_components,
)


@dataclass(frozen=True)
class DerivationTable:
    """Derivation given by generator images and an optional weight term.

    ``apply(f) = Leibniz(images)(f) + sum_k k * weight_factor * f_k``.
    """

    name: str
    images: Sequence[Form]
    weight_factor: Optional[Form] = None

    def apply(self, f: Form) -> Form:
        out = Form(kernels.derive(f.terms, tuple(g.terms for g in self.images)))
        if self.weight_factor is not None and f:
            scaled = linear_combination((k, part) for k, part in weight_components(f).items())
            out = out + self.weight_factor * scaled
        return out

    __call__ = apply

    def image(self, i: int) -> Form:
        """Value on the i-th generator, weight term included."""
        g = GENERATORS[i]
        out = self.images[i]
        if self.weight_factor is not None:
            out = out + self.weight_factor * g * GENERATOR_WEIGHTS[i]
        return out

    def as_pure_table(self) -> "DerivationTable":
        """Same derivation with the weight term folded into the images."""
        return DerivationTable(self.name, tuple(self.image(i) for i in range(5)))


_h = Fraction

DZ = DerivationTable("dz", (
    PZ,
    6 * P**2 - 30 * E4,
    ZERO,
    -P - E2,
    ZERO,
))

DTAU = DerivationTable("dtau", (
    (E1 * PZ + 2 * P**2 - 2 * E2 * P - 20 * E4) * _h(-1, 4),
    (5 * E4 - P**2) * E1 * _h(3, 2) + (E2 - P) * PZ * _h(3, 4),
    P**3 * _h(-1, 10) + PZ**2 * _h(1, 40) + P * E4 * _h(3, 2) + E4 * E2,
    (E1 * E2 + P * E1 + PZ * _h(1, 2)) * _h(1, 4),
    (E2**2 - 5 * E4) * _h(1, 4),
))


def _combine(name, parts, weight_factor=None) -> DerivationTable:
    """Table whose images are sum(coeff * D.image(i)) over ``parts = [(coeff, D)]``."""
    images = tuple(sum((coeff * D.images[i] for coeff, D in parts), ZERO) for i in range(5))
    return DerivationTable(name, images, weight_factor)


# E1 * dz is a derivation too (a multiple of one).
_E1DZ = DerivationTable("E1*dz", tuple(E1 * g for g in DZ.images))

OBERDIECK = _combine("oberdieck", [(4, DTAU), (1, _E1DZ)], weight_factor=-E2)
DELTA = DerivationTable("delta", (ZERO,) * 5, weight_factor=ONE * _h(1, 2))
THETA = _combine("theta", [(1, DTAU)], weight_factor=E2 * _h(-1, 4))
D_DERIV = _combine("d", [(1, DTAU), (_h(1, 4), _E1DZ)])


def dz(f: Form) -> Form:
    return DZ.apply(f)


def dtau(f: Form) -> Form:
    return DTAU.apply(f)


def raw_dz(f: Form) -> Form:
    return DZ.apply(f)


_MINUS_4_OVER_C = Form.constant(Scalar.c_power(-1, -4))


def raw_dtau(f: Form) -> Form:
    """Un-normalized tau-derivative: (-4/c) * dtau."""
    return _MINUS_4_OVER_C * DTAU.apply(f)


def oberdieck(f: Form) -> Form:
    """4 dtau(f) + E1 dz(f) - k e2 f on each weight-k component."""
    out = ZERO
    for k, part in weight_components(f).items():
        out = out + 4 * dtau(part) + E1 * dz(part) - k * E2 * part
    return out


def oberdieck_table(f: Form) -> Form:
    """Same operator computed from its generator table in one Leibniz pass."""
    return OBERDIECK.apply(f)


def delta(f: Form) -> Form:
    return linear_combination((Fraction(k, 2), part) for k, part in weight_components(f).items())


def theta(f: Form) -> Form:
    return dtau(f) - E2 * delta(f) * _h(1, 2)


def theta_via_oberdieck(f: Form) -> Form:
    return (oberdieck(f) - E1 * dz(f)) * _h(1, 4)


def d_deriv(f: Form) -> Form:
    return dtau(f) + E1 * dz(f) * _h(1, 4)


def d_via_oberdieck(f: Form) -> Form:
    return oberdieck(f) * _h(1, 4) + E2 * delta(f) * _h(1, 2)


def iterate(D, f: Form, n: int) -> Form:
    for _ in range(n):
        if not f:
            break
        f = D(f)
    return f


# --- Eisenstein series -------------------------------------------------------

_EIS_LOCK = threading.Lock()
_EIS: Dict[int, Form] = {}


def _eisenstein_next(n: int, memo: Dict[int, Form]) -> Form:
    """e_{2n+4} from e_2, ..., e_{2n+2}."""
    prev = memo[2 * n + 2]
    acc = (n + 1) * (2 * n + 1) * prev * E2 - 2 * (2 * n + 1) * dtau(prev)
    for a in range(1, n):
        b = n - a
        acc = acc + (2 * a + 1) * (a - 2 * b - 1) * memo[2 * a + 2] * memo[2 * b + 2]
    return acc * Fraction(1, (n + 2) * (2 * n + 5))


def eisenstein(k: int) -> Form:
    """e_k for even k >= 2, as a polynomial in the generators."""
    if not isinstance(k, int) or k < 2 or k % 2:
        raise ValueError(f"eisenstein(k) needs an even integer k >= 2, got {k!r}")
    cached = _EIS.get(k)
    if cached is not None:
        return cached
    with _EIS_LOCK:
        memo = dict(_EIS) or {2: E2, 4: E4, 6: e6()}
        top = max(memo)
        while top < k:
            memo[top + 2] = _eisenstein_next((top - 2) // 2, memo)
            top += 2
        _EIS.update(memo)
        return memo[k]
