"""Exact arithmetic in Q[c, 1/c][P, Pz, E4, E1, E2].

The five generators stand for the Weierstrass function, its z-derivative,
the weight-4 Eisenstein series, the first shifted Eisenstein series and the
quasimodular e2. ``c`` is a formal constant evaluated numerically as 2*pi*i.

Weights are 2, 3, 4, 1, 2. The double depth of a form is
``(deg_E2, deg_E1)``: modular depth first, elliptic depth second.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

from . import kernels
from ._rational import Q, to_fraction
from .kernels import CBIAS, MASK, SHIFT, UNITS

GENERATOR_NAMES = ("P", "Pz", "E4", "E1", "E2")
GENERATOR_WEIGHTS = (2, 3, 4, 1, 2)
IDX_P, IDX_PZ, IDX_E4, IDX_E1, IDX_E2 = range(5)

C_SHIFT = SHIFT * 5
C_UNIT = 1 << C_SHIFT
_C_BIAS_EXP = 512
_MAX_EXP = MASK


class Subalgebra(str, enum.Enum):
    """Polynomial subalgebras cut out by generator support."""

    JS = "JS"  # P, Pz, E4
    JS0inf = "JS0inf"  # + E1 (quasi-elliptic type)
    JSinf0 = "JSinf0"  # + E2 (quasi-modular type)
    JSinf = "JSinf"  # all five

    @classmethod
    def parse(cls, name) -> "Subalgebra":
        if isinstance(name, cls):
            return name
        key = str(name).replace("_", "").replace("^", "").replace(",", "").lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(f"unknown subalgebra {name!r}; expected one of JS, JS0inf, JSinf0, JSinf")

    @property
    def generators(self) -> Tuple[int, ...]:
        return _SUPPORT[self]


_SUPPORT = {
    Subalgebra.JS: (IDX_P, IDX_PZ, IDX_E4),
    Subalgebra.JS0inf: (IDX_P, IDX_PZ, IDX_E4, IDX_E1),
    Subalgebra.JSinf0: (IDX_P, IDX_PZ, IDX_E4, IDX_E2),
    Subalgebra.JSinf: (IDX_P, IDX_PZ, IDX_E4, IDX_E1, IDX_E2),
}


# --- packed keys -----------------------------------------------------------

def _unpack(key: int) -> Tuple[Tuple[int, ...], int]:
    exps = tuple((key >> (SHIFT * i)) & MASK for i in range(5))
    cexp = ((key >> C_SHIFT) & MASK) - _C_BIAS_EXP
    return exps, cexp


def _pack(exps, cexp: int = 0) -> int:
    if not -_C_BIAS_EXP <= cexp < _C_BIAS_EXP:
        raise OverflowError(f"c-exponent {cexp} out of range")
    key = (cexp + _C_BIAS_EXP) << C_SHIFT
    for i, e in enumerate(exps):
        if not 0 <= e <= _MAX_EXP:
            raise OverflowError(f"exponent {e} out of range")
        key |= e << (SHIFT * i)
    return key


def _key_weight(key: int) -> int:
    return (
        2 * (key & MASK)
        + 3 * ((key >> SHIFT) & MASK)
        + 4 * ((key >> (2 * SHIFT)) & MASK)
        + ((key >> (3 * SHIFT)) & MASK)
        + 2 * ((key >> (4 * SHIFT)) & MASK)
    )


def _key_depth(key: int) -> Tuple[int, int]:
    return (key >> (4 * SHIFT)) & MASK, (key >> (3 * SHIFT)) & MASK


def _key_generator_part(key: int) -> int:
    return key & (C_UNIT - 1)


# --- Scalar ------------------------------------------------------------------

class Scalar:
    """Laurent polynomial in ``c`` with rational coefficients."""

    __slots__ = ("_c",)

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self._c = dict(value._c)
        elif isinstance(value, dict):
            self._c = {int(e): Q(v) for e, v in value.items() if v}
        else:
            v = Q(value)
            self._c = {0: v} if v else {}

    @classmethod
    def c_power(cls, n: int, coeff=1) -> "Scalar":
        return cls({n: coeff})

    def coefficients(self) -> Dict[int, object]:
        return dict(self._c)

    def is_rational(self) -> bool:
        return not self._c or set(self._c) == {0}

    def rational(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational constant")
        return self._c.get(0, Q(0))

    def evaluate(self, c: complex) -> complex:
        return sum(complex(float(v)) * c**e for e, v in self._c.items())

    def _coerce(self, other):
        if isinstance(other, Scalar):
            return other
        try:
            return Scalar(other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._c)
        for e, v in other._c.items():
            out[e] = out.get(e, 0) + v
        return Scalar(out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[int, object] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + v1 * v2
        return Scalar(out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if not self._c:
            return "0"
        return str(Form({(e + _C_BIAS_EXP) << C_SHIFT: v for e, v in self._c.items()}))


# --- Monomial ----------------------------------------------------------------

class Monomial(NamedTuple):
    """Exponents of P^p Pz^pz E4^e4 E1^e1 E2^e2."""

    p: int = 0
    pz: int = 0
    e4: int = 0
    e1: int = 0
    e2: int = 0

    @property
    def weight(self) -> int:
        return sum(w * e for w, e in zip(GENERATOR_WEIGHTS, self))

    @property
    def depth(self) -> Tuple[int, int]:
        return self.e2, self.e1

    def to_form(self) -> "Form":
        return Form({_pack(self): Q(1)})

    def __str__(self):
        return _format_factors(self) or "1"


def _format_factors(exps) -> str:
    parts = []
    for name, e in zip(GENERATOR_NAMES, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _sort_key(key: int):
    exps, cexp = _unpack(key)
    return (_key_weight(key), exps, cexp)


# --- Form --------------------------------------------------------------------

class Form:
    """Element of the polynomial algebra on the five generators.

    Stored as a flat sparse map from packed (generator, c) exponents to
    nonzero rationals. Instances are immutable; treat ``terms`` as read-only.
    """

    __slots__ = ("_t", "_hash")

    def __init__(self, terms=None):
        self._t: Dict[int, object] = terms if terms is not None else {}
        self._hash = None

    # construction
    @classmethod
    def constant(cls, value) -> "Form":
        if isinstance(value, Form):
            return value
        if isinstance(value, Scalar):
            return cls({(e + _C_BIAS_EXP) << C_SHIFT: v for e, v in value._c.items()})
        v = Q(value)
        return cls({CBIAS: v} if v else {})

    @classmethod
    def from_terms(cls, terms) -> "Form":
        """Build from an iterable of ``(Monomial | exponent tuple, coeff)``; coeff may be a Scalar."""
        out: Dict[int, object] = {}
        for mono, coeff in terms:
            base = _pack(tuple(mono))
            scal = coeff if isinstance(coeff, Scalar) else Scalar(coeff)
            for e, v in scal._c.items():
                k = base + (e << C_SHIFT)
                out[k] = out.get(k, 0) + v
        return cls({k: v for k, v in out.items() if v})

    @property
    def terms(self) -> Dict[int, object]:
        return self._t

    # inspection
    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __len__(self):
        return len(self._t)

    def flat_terms(self) -> Iterator[Tuple[Monomial, int, object]]:
        """Yield ``(monomial, c_exponent, rational)`` in canonical order."""
        for key in sorted(self._t, key=_sort_key, reverse=True):
            exps, cexp = _unpack(key)
            yield Monomial(*exps), cexp, self._t[key]

    def items(self) -> Iterator[Tuple[Monomial, Scalar]]:
        """Yield ``(monomial, Scalar coefficient)`` grouped by generator monomial."""
        groups: Dict[int, Dict[int, object]] = {}
        for key, v in self._t.items():
            groups.setdefault(_key_generator_part(key), {})[((key >> C_SHIFT) & MASK) - _C_BIAS_EXP] = v
        for g in sorted(groups, key=lambda k: _sort_key(k | CBIAS), reverse=True):
            exps, _ = _unpack(g | CBIAS)
            yield Monomial(*exps), Scalar(groups[g])

    def coefficient(self, mono) -> Scalar:
        base = _pack(tuple(mono))
        out = {}
        for key, v in self._t.items():
            if _key_generator_part(key) == _key_generator_part(base):
                out[((key >> C_SHIFT) & MASK) - _C_BIAS_EXP] = v
        return Scalar(out)

    def monomials(self) -> List[Monomial]:
        return [m for m, _ in self.items()]

    def max_exponents(self) -> Tuple[int, ...]:
        top = [0] * 5
        lo_c = hi_c = 0
        for key in self._t:
            exps, cexp = _unpack(key)
            for i, e in enumerate(exps):
                if e > top[i]:
                    top[i] = e
            lo_c, hi_c = min(lo_c, cexp), max(hi_c, cexp)
        return tuple(top) + (lo_c, hi_c)

    def is_rational_constant(self) -> bool:
        return all(k == CBIAS for k in self._t)

    # arithmetic
    @staticmethod
    def _coerce(other):
        if isinstance(other, Form):
            return other
        if isinstance(other, Scalar):
            return Form.constant(other)
        try:
            return Form.constant(other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return Form({k: -v for k, v in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(other, self, -1)

    def __mul__(self, other):
        if isinstance(other, Form):
            return mul(self, other)
        if isinstance(other, Scalar):
            if other.is_rational():
                return self.scale(other.rational())
            return mul(self, Form.constant(other))
        try:
            q = Q(other)
        except TypeError:
            return NotImplemented
        return self.scale(q)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Form):
            if not other.is_rational_constant() or not other:
                raise ZeroDivisionError("can only divide by a nonzero rational constant")
            other = other._t[CBIAS]
        q = Q(other)
        if not q:
            raise ZeroDivisionError("division by zero")
        return self.scale(1 / q)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ValueError("exponent must be an integer")
        if n < 0:
            # only units (a nonzero rational times a power of c) are invertible
            if len(self._t) != 1 or _key_generator_part(next(iter(self._t))) != _key_generator_part(CBIAS):
                raise ValueError("negative exponent on a non-invertible form")
            (key, v), = self._t.items()
            cexp = ((key >> C_SHIFT) & MASK) - _C_BIAS_EXP
            return Form({_pack((0,) * 5, -cexp * -n): (1 / v) ** -n})
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, q) -> "Form":
        q = Q(q)
        if not q:
            return ZERO
        return Form({k: v * q for k, v in self._t.items()})

    def __eq__(self, other):
        if not isinstance(other, Form):
            other = self._coerce(other)
            if other is NotImplemented:
                return False
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __repr__(self):
        return f"Form({self})"

    def __str__(self):
        return format_form(self)


def format_form(f: Form) -> str:
    """Canonical text: highest weight first, then lexicographically by exponents."""
    if not f._t:
        return "0"
    pieces = []
    for mono, cexp, v in f.flat_terms():
        factors = []
        if cexp == 1:
            factors.append("c")
        elif cexp:
            factors.append(f"c^{cexp}")
        gens = _format_factors(mono)
        if gens:
            factors.append(gens)
        neg = v < 0
        mag = -v if neg else v
        if mag == 1 and factors:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        pieces.append((neg, body))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _gen(i: int) -> Form:
    exps = [0] * 5
    exps[i] = 1
    return Form({_pack(exps): Q(1)})


ZERO = Form({})
ONE = Form({CBIAS: Q(1)})
P = _gen(IDX_P)
PZ = _gen(IDX_PZ)
E4 = _gen(IDX_E4)
E1 = _gen(IDX_E1)
E2 = _gen(IDX_E2)
C = Form({CBIAS + C_UNIT: Q(1)})
GENERATORS = (P, PZ, E4, E1, E2)


# --- operations --------------------------------------------------------------

def add(f: Form, g: Form, sign: int = 1) -> Form:
    if len(f._t) < len(g._t) and sign == 1:
        f, g = g, f
    out = dict(f._t)
    if sign == 1:
        for k, v in g._t.items():
            s = out.get(k)
            if s is None:
                out[k] = v
            else:
                s = s + v
                if s:
                    out[k] = s
                else:
                    del out[k]
    else:
        for k, v in g._t.items():
            s = out.get(k)
            if s is None:
                out[k] = -v
            else:
                s = s - v
                if s:
                    out[k] = s
                else:
                    del out[k]
    return Form(out)


def linear_combination(pairs) -> Form:
    """Sum of ``coeff * form`` over ``(coeff, form)`` pairs with rational coeffs."""
    out: Dict[int, object] = {}
    for coeff, f in pairs:
        q = Q(coeff)
        if not q:
            continue
        for k, v in f._t.items():
            out[k] = out.get(k, 0) + q * v
    return Form({k: v for k, v in out.items() if v})


def _check_overflow(f: Form, g: Form) -> None:
    mf, mg = f.max_exponents(), g.max_exponents()
    for i in range(5):
        if mf[i] + mg[i] > _MAX_EXP:
            raise OverflowError("generator exponent exceeds packed range")
    if mf[5] + mg[5] < -_C_BIAS_EXP or mf[6] + mg[6] >= _C_BIAS_EXP:
        raise OverflowError("c-exponent exceeds packed range")


def mul(f: Form, g: Form) -> Form:
    if not f._t or not g._t:
        return ZERO
    _check_overflow(f, g)
    return Form(kernels.mul(f._t, g._t))


def weight_of(f: Form) -> Optional[int]:
    """Common weight of all monomials, or None for zero / inhomogeneous forms."""
    weights = {_key_weight(k) for k in f._t}
    return weights.pop() if len(weights) == 1 else None


def weight_components(f: Form) -> Dict[int, Form]:
    parts: Dict[int, Dict[int, object]] = {}
    for k, v in f._t.items():
        parts.setdefault(_key_weight(k), {})[k] = v
    return {w: Form(t) for w, t in sorted(parts.items())}


def depth_of(f: Form) -> Tuple[int, int]:
    if not f._t:
        raise ValueError("depth undefined for zero")
    s1 = s2 = 0
    for k in f._t:
        d2, d1 = _key_depth(k)
        s1, s2 = max(s1, d2), max(s2, d1)
    return s1, s2


@dataclass(frozen=True)
class DepthProfile:
    weight: Optional[int]
    depth: Tuple[int, int]

    @property
    def subalgebra(self) -> Subalgebra:
        s1, s2 = self.depth
        if s1 == 0 and s2 == 0:
            return Subalgebra.JS
        if s1 == 0:
            return Subalgebra.JS0inf
        if s2 == 0:
            return Subalgebra.JSinf0
        return Subalgebra.JSinf


def profile(f: Form) -> DepthProfile:
    return DepthProfile(weight_of(f), depth_of(f) if f else (0, 0))


def depth_expand(f: Form) -> Dict[Tuple[int, int], Form]:
    """Coefficients of X^j1 Y^j2 after E2 -> E2 - cX and E1 -> E1 + cY."""
    out: Dict[Tuple[int, int], Dict[int, object]] = {}
    u1, u2 = UNITS[IDX_E1], UNITS[IDX_E2]
    for key, v in f._t.items():
        d2, d1 = _key_depth(key)
        for j1 in range(d2 + 1):
            b1 = math.comb(d2, j1) * (-1 if j1 & 1 else 1)
            for j2 in range(d1 + 1):
                k = key - j1 * u2 - j2 * u1 + (j1 + j2) * C_UNIT
                bucket = out.setdefault((j1, j2), {})
                bucket[k] = bucket.get(k, 0) + v * (b1 * math.comb(d1, j2))
    return {
        j: Form({k: v for k, v in t.items() if v})
        for j, t in sorted(out.items())
        if any(t.values())
    }


def q_op(j1: int, j2: int, f: Form) -> Form:
    """The (j1, j2) depth-expansion coefficient; zero off the expansion's support."""
    if j1 < 0 or j2 < 0:
        return ZERO
    u1, u2 = UNITS[IDX_E1], UNITS[IDX_E2]
    sign = -1 if j1 & 1 else 1
    shift = j1 * u2 + j2 * u1 - (j1 + j2) * C_UNIT
    out: Dict[int, object] = {}
    for key, v in f._t.items():
        d2, d1 = _key_depth(key)
        if d2 >= j1 and d1 >= j2:
            out[key - shift] = v * (sign * math.comb(d2, j1) * math.comb(d1, j2))
    return Form(out)


def in_subalgebra(f: Form, which) -> bool:
    which = Subalgebra.parse(which)
    allowed = set(which.generators)
    for key in f._t:
        exps, _ = _unpack(key)
        if any(e and i not in allowed for i, e in enumerate(exps)):
            return False
    return True


def e6() -> Form:
    """e6 written in the Weierstrass generators."""
    return _E6


_E6 = Form.from_terms([
    ((0, 2, 0, 0, 0), Fraction(-1, 140)),
    ((3, 0, 0, 0, 0), Fraction(1, 35)),
    ((1, 0, 1, 0, 0), Fraction(-3, 7)),
])


def iter_monomials(k: int, which=Subalgebra.JSinf) -> Iterator[Monomial]:
    """All monomials of weight ``k`` supported on the subalgebra's generators."""
    gens = Subalgebra.parse(which).generators
    if k < 0:
        return
    exps = [0] * 5

    def rec(pos: int, remaining: int):
        i = gens[pos]
        w = GENERATOR_WEIGHTS[i]
        if pos == len(gens) - 1:
            if remaining % w == 0:
                exps[i] = remaining // w
                yield Monomial(*exps)
                exps[i] = 0
            return
        for e in range(remaining // w, -1, -1):
            exps[i] = e
            yield from rec(pos + 1, remaining - e * w)
        exps[i] = 0

    yield from rec(0, k)


def basis_monomials(k: int, which=Subalgebra.JSinf) -> List[Monomial]:
    return sorted(iter_monomials(k, which), key=lambda m: (m.weight, tuple(m)), reverse=True)


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.choice((-1, 1)) * rng.randint(1, 9), rng.randint(1, 6))


def random_homogeneous(k: int, which=Subalgebra.JSinf, seed: int = 0, terms: Optional[int] = None) -> Form:
    """Deterministic random rational combination of weight-``k`` basis monomials.

    ``terms`` caps the number of monomials used (a seeded random subset).
    """
    basis = basis_monomials(k, which)
    if not basis:
        raise ValueError(f"no monomials of weight {k} in {Subalgebra.parse(which).value}")
    rng = random.Random(f"{seed}:{k}:{Subalgebra.parse(which).value}")
    chosen = basis if terms is None or terms >= len(basis) else rng.sample(basis, terms)
    return Form.from_terms((m, _random_rational(rng)) for m in chosen)


def random_with_depth(k: int, s1: int, s2: int, rng: random.Random, terms: Optional[int] = 3) -> Form:
    """Random weight-``k`` form of exact depth ``(s1, s2)``.

    Built as a sum of ``g * E2^j1 * E1^j2`` with ``g`` in JS of weight
    ``k - 2 j1 - j2``; the top coefficient is forced nonzero.
    """
    top = k - 2 * s1 - s2
    if top < 0 or not basis_monomials(top, Subalgebra.JS):
        raise ValueError(f"no weight-{k} form of depth {(s1, s2)}")
    out = ZERO
    for j1 in range(s1 + 1):
        for j2 in range(s2 + 1):
            w = k - 2 * j1 - j2
            if w < 0 or not basis_monomials(w, Subalgebra.JS):
                continue
            if (j1, j2) != (s1, s2) and rng.random() < 0.3:
                continue
            g = random_homogeneous(w, Subalgebra.JS, seed=rng.randrange(1 << 30), terms=terms)
            out = out + g * E2**j1 * E1**j2
    return out


def modular_basis(k: int) -> List[Form]:
    """E4^a * e6^b with 4a + 6b = k (the modular forms inside JS)."""
    return [E4**a * e6() ** b for a in range(k // 4, -1, -1) for b in [(k - 4 * a) // 6] if 4 * a + 6 * b == k]


def random_modular(k: int, seed: int = 0) -> Form:
    basis = modular_basis(k)
    if not basis:
        raise ValueError(f"no modular forms of weight {k}")
    rng = random.Random(f"M:{seed}:{k}")
    return linear_combination((_random_rational(rng), b) for b in basis)


def solve_in_span(f: Form, basis: List[Form]) -> Optional[List[Fraction]]:
    """Exact coordinates of ``f`` in ``span(basis)``, or None if it is outside.

    Gaussian elimination over the rationals; the basis is assumed linearly independent.
    """
    keys = sorted({k for b in basis for k in b._t} | set(f._t))
    zero = Fraction(0)
    cols = [[to_fraction(b._t[k]) if k in b._t else zero for k in keys] for b in basis]
    rhs = [to_fraction(f._t[k]) if k in f._t else zero for k in keys]
    n = len(basis)
    rows = [[cols[j][i] for j in range(n)] + [rhs[i]] for i in range(len(keys))]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                fac = rows[i][col]
                rows[i] = [a - fac * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(all(x == 0 for x in row[:n]) and row[n] != 0 for row in rows):
        return None
    sol = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = rows[i][n]
    return sol


def in_modular(f: Form) -> bool:
    """Membership in M = Q[E4, e6] (each weight component checked separately)."""
    for w, part in weight_components(f).items():
        if solve_in_span(part, modular_basis(w)) is None:
            return False
    return True
