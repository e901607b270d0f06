"""Numeric evaluation of the generators and checks of their transformation laws.

Two independent evaluators exist for P, Pz and E1:

* ``laurent``: Laurent series in z whose coefficients are Eisenstein values,
  valid for |z| below the shortest nonzero lattice vector;
* ``qw``: double expansions in q = e(tau) and w = e(z), valid in the strip
  |Im z| < Im tau. These are checked against the Laurent coefficients
  (see :func:`admit_qw_oracle`) before they are used as an oracle.

``auto`` picks Laurent when its tail bound passes and falls back to q,w.
Everything is double precision.
"""

from __future__ import annotations

import cmath
import math
import os
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .algebra import Form, depth_expand, weight_of
from .kernels import MASK, SHIFT

TWO_PI_I = 2j * math.pi


class DomainError(ValueError):
    """A point lies outside the region where the requested series is trusted."""


class PoleError(DomainError):
    """z is too close to a lattice point."""


@dataclass(frozen=True)
class NumericContext:
    nq: int = 30
    nz: int = 20
    q_max: float = 0.7
    z_frac: float = 0.8
    tol: float = 1e-9
    pole_eps: float = 1e-3
    strip_frac: float = 0.8
    method: str = "auto"

    def __post_init__(self):
        if self.nq < 1 or self.nz < 1:
            raise ValueError("truncation orders must be positive")
        if self.method not in ("auto", "laurent", "qw"):
            raise ValueError(f"unknown evaluation method {self.method!r}")

    @classmethod
    def from_env(cls, **overrides) -> "NumericContext":
        """Defaults, then QJACOBI_NQ / QJACOBI_NZ / QJACOBI_TOL, then explicit overrides."""
        env = {}
        if "QJACOBI_NQ" in os.environ:
            env["nq"] = int(os.environ["QJACOBI_NQ"])
        if "QJACOBI_NZ" in os.environ:
            env["nz"] = int(os.environ["QJACOBI_NZ"])
        if "QJACOBI_TOL" in os.environ:
            env["tol"] = float(os.environ["QJACOBI_TOL"])
        env.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**env)

    def with_method(self, method: str) -> "NumericContext":
        return replace(self, method=method)


DEFAULT_CONTEXT = NumericContext()


@dataclass(frozen=True)
class SamplePoint:
    tau: complex
    z: complex

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise DomainError("tau must lie in the upper half-plane")


# --- Eisenstein series -------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    import sympy

    b = sympy.bernoulli(n)
    return Fraction(int(b.p), int(b.q))


@lru_cache(maxsize=None)
def _eisenstein_coefficients(k: int, nq: int) -> Tuple[float, Tuple[float, ...]]:
    """(constant term, normalized q-coefficients 1..nq) of e_k."""
    from sympy import divisor_sigma

    bk = bernoulli(k)
    lead = float(Fraction(2**k, math.factorial(k)) * abs(bk)) * math.pi**k
    ratio = Fraction(-2 * k) / bk
    coeffs = tuple(float(ratio * int(divisor_sigma(n, k - 1))) for n in range(1, nq + 1))
    return lead, coeffs


def _q_of(tau: complex, ctx: NumericContext) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError("tau must lie in the upper half-plane")
    q = cmath.exp(TWO_PI_I * tau)
    if abs(q) > ctx.q_max:
        raise DomainError(f"|e(tau)| = {abs(q):.3g} exceeds the guard {ctx.q_max}")
    return q


def eval_eisenstein(k: int, tau: complex, ctx: NumericContext = DEFAULT_CONTEXT) -> complex:
    """e_k(tau) from its truncated Fourier expansion."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    q = _q_of(tau, ctx)
    lead, coeffs = _eisenstein_coefficients(k, ctx.nq)
    total = 0j
    qn = 1 + 0j
    last = 0.0
    for a in coeffs:
        qn *= q
        term = a * qn
        total += term
        last = abs(term)
    value = lead * (1 + total)
    if lead * last > ctx.tol * max(1.0, abs(value)) * 1e-3:
        raise DomainError(f"q-series for e_{k} not converged at nq={ctx.nq}; increase nq or Im tau")
    return value


# --- lattice geometry --------------------------------------------------------

def shortest_period(tau: complex) -> float:
    """Length of the shortest nonzero vector of Z + tau Z."""
    tau = complex(tau)
    best = 1.0
    nmax = int(math.ceil(1 / tau.imag)) + 1
    for n in range(1, nmax + 1):
        m0 = round(-n * tau.real)
        for m in (m0 - 1, m0, m0 + 1):
            best = min(best, abs(m + n * tau))
    return best


def lattice_distance(tau: complex, z: complex) -> float:
    """Distance from z to the nearest point of Z + tau Z."""
    tau, z = complex(tau), complex(z)
    n0 = round(z.imag / tau.imag)
    best = math.inf
    for n in (n0 - 1, n0, n0 + 1):
        w = z - n * tau
        m0 = round(w.real)
        for m in (m0 - 1, m0, m0 + 1):
            best = min(best, abs(w - m))
    return best


def _pole_guard(tau, z, ctx):
    if lattice_distance(tau, z) < ctx.pole_eps:
        raise PoleError(f"z = {z} is within {ctx.pole_eps} of a lattice point")


# --- Laurent evaluators ------------------------------------------------------

def _eis_table(tau: complex, n: int, ctx: NumericContext) -> List[complex]:
    """[e_2, e_4, ..., e_{2n+2}] at tau."""
    return [eval_eisenstein(2 * j + 2, tau, ctx) for j in range(n + 1)]


_LAURENT_SAFETY = 8.0


def laurent_tail_bound(tau: complex, z: complex, ctx: NumericContext) -> float:
    """Rough bound on the dropped Laurent terms of P, Pz and E1 (largest of the three)."""
    rho = shortest_period(tau)
    r = abs(complex(z)) / rho
    if r >= ctx.z_frac:
        return math.inf
    n = ctx.nz + 1
    geo = 1 / (1 - r * r)
    wp = (2 * n + 1) * r ** (2 * n) / rho**2
    wpz = (2 * n + 1) * (2 * n) * r ** (2 * n - 1) / rho**3
    e1 = r ** (2 * n - 1) / rho
    return _LAURENT_SAFETY * geo * max(wp, wpz, e1)


def _laurent_values(tau, z, ctx, eis=None) -> Tuple[complex, complex, complex]:
    z = complex(z)
    rho = shortest_period(tau)
    if abs(z) > ctx.z_frac * rho:
        raise DomainError(f"|z| = {abs(z):.3g} exceeds {ctx.z_frac} x shortest period {rho:.3g}")
    _pole_guard(tau, z, ctx)
    eis = eis if eis is not None else _eis_table(tau, ctx.nz, ctx)
    z2 = z * z
    wp = 1 / z2
    wpz = -2 / (z2 * z)
    e1 = 1 / z - eis[0] * z
    zp = 1 + 0j  # z^(2n-2)
    for n in range(1, ctx.nz + 1):
        coeff = (2 * n + 1) * eis[n]
        wpz += 2 * n * coeff * zp * z
        zp *= z2
        wp += coeff * zp
        e1 -= eis[n] * zp * z
    return wp, wpz, e1


# --- q,w evaluators ----------------------------------------------------------

@lru_cache(maxsize=None)
def _divisors(n: int) -> Tuple[int, ...]:
    return tuple(d for d in range(1, n + 1) if n % d == 0)


def _qw_values(tau, z, ctx) -> Tuple[complex, complex, complex]:
    tau, z = complex(tau), complex(z)
    q = _q_of(tau, ctx)
    if abs(z.imag) > ctx.strip_frac * tau.imag:
        raise DomainError(f"|Im z| = {abs(z.imag):.3g} exceeds {ctx.strip_frac} x Im tau")
    _pole_guard(tau, z, ctx)
    w = cmath.exp(TWO_PI_I * z)
    wi = 1 / w
    # powers w^d, w^-d for d <= nq
    wp_pow = [1 + 0j]
    wm_pow = [1 + 0j]
    for _ in range(ctx.nq):
        wp_pow.append(wp_pow[-1] * w)
        wm_pow.append(wm_pow[-1] * wi)
    s_wp = s_wpz = s_e1 = 0j
    qn = 1 + 0j
    last = 0.0
    for n in range(1, ctx.nq + 1):
        qn *= q
        a = b = e = 0j
        for d in _divisors(n):
            plus, minus = wp_pow[d], wm_pow[d]
            a += d * (plus + minus - 2)
            b += d * d * (plus - minus)
            e += plus - minus
        s_wp += qn * a
        s_wpz += qn * b
        s_e1 += qn * e
        last = abs(qn) * n * n * max(abs(wp_pow[n]), abs(wm_pow[n]))
    c = TWO_PI_I
    wp = c**2 * (1 / 12 + w / (1 - w) ** 2 + s_wp)
    wpz = c**3 * (w * (1 + w) / (1 - w) ** 3 + s_wpz)
    e1 = math.pi * 1j * (w + 1) / (w - 1) - c * s_e1
    scale = max(1.0, abs(wp), abs(wpz), abs(e1))
    if abs(c) ** 3 * last > ctx.tol * scale * 1e-2:
        raise DomainError(f"q,w series not converged at nq={ctx.nq}; move z toward the real axis")
    return wp, wpz, e1


# --- dispatch ----------------------------------------------------------------

def _jacobi_values(tau, z, ctx: NumericContext, eis=None) -> Tuple[complex, complex, complex]:
    method = ctx.method
    if method == "laurent":
        return _laurent_values(tau, z, ctx, eis)
    if method == "qw":
        return _qw_values(tau, z, ctx)
    _pole_guard(tau, z, ctx)
    if laurent_tail_bound(tau, z, ctx) <= ctx.tol * 1e-2:
        return _laurent_values(tau, z, ctx, eis)
    try:
        return _qw_values(tau, z, ctx)
    except PoleError:
        raise
    except DomainError as exc:
        raise DomainError(f"neither Laurent nor q,w evaluation is trusted at tau={tau}, z={z}: {exc}") from None


def eval_wp(tau, z, ctx: NumericContext = DEFAULT_CONTEXT) -> complex:
    return _jacobi_values(tau, z, ctx)[0]


def eval_wp_z(tau, z, ctx: NumericContext = DEFAULT_CONTEXT) -> complex:
    return _jacobi_values(tau, z, ctx)[1]


def eval_E1(tau, z, ctx: NumericContext = DEFAULT_CONTEXT) -> complex:
    return _jacobi_values(tau, z, ctx)[2]


def generator_values(tau, z, ctx: NumericContext = DEFAULT_CONTEXT, need_z: bool = True) -> Tuple[complex, ...]:
    """(P, Pz, E4, E1, E2) at (tau, z); z-dependent entries are None if not needed."""
    e2 = eval_eisenstein(2, tau, ctx)
    e4 = eval_eisenstein(4, tau, ctx)
    if not need_z:
        return None, None, e4, None, e2
    wp, wpz, e1 = _jacobi_values(tau, z, ctx)
    return wp, wpz, e4, e1, e2


def eval_form(f: Form, tau, z, ctx: NumericContext = DEFAULT_CONTEXT, values=None) -> complex:
    """Evaluate f with generators replaced by their values and c by 2 pi i."""
    if not f:
        return 0j
    tops = f.max_exponents()
    if values is None:
        need_z = bool(tops[0] or tops[1] or tops[3])
        values = generator_values(tau, z, ctx, need_z)
    total = 0j
    for key, coeff in f.terms.items():
        term = complex(float(coeff))
        for i in range(5):
            e = (key >> (SHIFT * i)) & MASK
            if e:
                term *= values[i] ** e
        cexp = ((key >> (SHIFT * 5)) & MASK) - 512
        if cexp:
            term *= TWO_PI_I**cexp
        total += term
    return total


# --- Jacobi group ------------------------------------------------------------

@dataclass(frozen=True)
class JacobiGroupElement:
    a: int = 1
    b: int = 0
    c: int = 0
    d: int = 1
    lam: int = 0
    mu: int = 0

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant {self.a * self.d - self.b * self.c} != 1")

    @classmethod
    def matrix(cls, a, b, c, d) -> "JacobiGroupElement":
        return cls(a, b, c, d)

    @classmethod
    def translation(cls, lam: int, mu: int) -> "JacobiGroupElement":
        return cls(1, 0, 0, 1, lam, mu)

    def __mul__(self, other: "JacobiGroupElement") -> "JacobiGroupElement":
        a, b, c, d = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        return JacobiGroupElement(
            a * a2 + b * c2,
            a * b2 + b * d2,
            c * a2 + d * c2,
            c * b2 + d * d2,
            self.lam * a2 + self.mu * c2 + other.lam,
            self.lam * b2 + self.mu * d2 + other.mu,
        )

    def __str__(self):
        return f"(({self.a},{self.b}),({self.c},{self.d}));({self.lam},{self.mu})"


IDENTITY = JacobiGroupElement()
S = JacobiGroupElement(0, -1, 1, 0)
T = JacobiGroupElement(1, 1, 0, 1)
STANDARD_ELEMENTS: Dict[str, JacobiGroupElement] = {
    "S": S,
    "T": T,
    "ST": S * T,
    "I,(1,0)": JacobiGroupElement.translation(1, 0),
    "I,(0,1)": JacobiGroupElement.translation(0, 1),
    "S,(1,-1)": JacobiGroupElement(0, -1, 1, 0, 1, -1),
}


def cocycle_J(A: JacobiGroupElement, tau, z) -> complex:
    return A.c * complex(tau) + A.d


def cocycle_X(A: JacobiGroupElement, tau, z) -> complex:
    return A.c / (A.c * complex(tau) + A.d)


def cocycle_Y(A: JacobiGroupElement, tau, z) -> complex:
    return (A.c * complex(z) + A.c * A.mu - A.d * A.lam) / (A.c * complex(tau) + A.d)


def group_action(A: JacobiGroupElement, tau, z) -> Tuple[complex, complex]:
    tau, z = complex(tau), complex(z)
    j = A.c * tau + A.d
    return (A.a * tau + A.b) / j, (z + A.lam * tau + A.mu) / j


def cocycle_relation_residual(A: JacobiGroupElement, B: JacobiGroupElement, points: Iterable) -> float:
    """Largest defect of the three 1-cocycle relations over the points."""
    AB = A * B
    worst = 0.0
    for p in points:
        tau, z = _point(p)
        jb = cocycle_J(B, tau, z)
        t2, z2 = group_action(B, tau, z)
        res = (
            abs(cocycle_J(AB, tau, z) - cocycle_J(A, t2, z2) * jb),
            abs(cocycle_Y(AB, tau, z) - (cocycle_Y(A, t2, z2) / jb + cocycle_Y(B, tau, z))),
            abs(cocycle_X(AB, tau, z) - (cocycle_X(A, t2, z2) / jb**2 + cocycle_X(B, tau, z))),
        )
        worst = max(worst, *res)
    return worst


def _point(p) -> Tuple[complex, complex]:
    if isinstance(p, SamplePoint):
        return complex(p.tau), complex(p.z)
    tau, z = p
    return complex(tau), complex(z)


def _relative(diff: float, ref: complex) -> float:
    return diff / max(1.0, abs(ref))


def transformation_residual(f: Form, A: JacobiGroupElement, points: Iterable, ctx: NumericContext = DEFAULT_CONTEXT) -> float:
    """Largest relative gap between J^-k f(A.x) and sum_j Q_j(f)(x) X^j1 Y^j2.

    The gap at each point is divided by max(1, |J^-k f(A.x)|).
    """
    k = weight_of(f)
    if k is None:
        if not f:
            return 0.0
        raise ValueError("transformation law needs a homogeneous form")
    expansion = depth_expand(f)
    worst = 0.0
    for p in points:
        tau, z = _point(p)
        t2, z2 = group_action(A, tau, z)
        lhs = cocycle_J(A, tau, z) ** (-k) * eval_form(f, t2, z2, ctx)
        X, Y = cocycle_X(A, tau, z), cocycle_Y(A, tau, z)
        vals = generator_values(tau, z, ctx)
        rhs = sum(eval_form(g, tau, z, ctx, vals) * X**j1 * Y**j2 for (j1, j2), g in expansion.items())
        worst = max(worst, _relative(abs(lhs - rhs), lhs))
    return worst


# --- dual representation -----------------------------------------------------

_WHICH = {"wp": 0, "P": 0, "wp_z": 1, "Pz": 1, "E1": 2, "e1": 2}


def dual_representation_residual(which: str, points: Iterable, ctx: NumericContext = DEFAULT_CONTEXT) -> float:
    """Largest relative gap between the Laurent and q,w values of P, Pz or E1."""
    idx = _WHICH[which]
    worst = 0.0
    for p in points:
        tau, z = _point(p)
        lv = _laurent_values(tau, z, ctx)[idx]
        qv = _qw_values(tau, z, ctx)[idx]
        worst = max(worst, _relative(abs(lv - qv), lv))
    return worst


def laurent_coefficients_numeric(which: str, tau, n: int, ctx: NumericContext = DEFAULT_CONTEXT) -> Dict[int, complex]:
    """Laurent coefficients (by power of z) implied by the Eisenstein values at tau."""
    eis = _eis_table(tau, n, ctx)
    if _WHICH[which] == 0:
        return {-2: 1 + 0j, **{2 * j: (2 * j + 1) * eis[j] for j in range(1, n + 1)}}
    if _WHICH[which] == 2:
        return {-1: 1 + 0j, **{2 * j + 1: -eis[j] for j in range(0, n + 1)}}
    return {-3: -2 + 0j, **{2 * j - 1: 2 * j * (2 * j + 1) * eis[j] for j in range(1, n + 1)}}


def qw_coefficients_fft(which: str, tau, radius: float, samples: int = 128, ctx: NumericContext = DEFAULT_CONTEXT) -> np.ndarray:
    """Laurent coefficients of the q,w evaluator read off a circle |z| = radius.

    Entry ``m`` of the result (for m in [-samples/2, samples/2)) is the z^m coefficient.
    """
    idx = _WHICH[which]
    thetas = np.arange(samples) * (2 * np.pi / samples)
    zs = radius * np.exp(1j * thetas)
    vals = np.array([_qw_values(tau, complex(zv), ctx)[idx] for zv in zs])
    raw = np.fft.fft(vals) / samples
    m = np.fft.fftfreq(samples, d=1.0 / samples).astype(int)
    return {int(mm): complex(raw[i]) / radius ** int(mm) for i, mm in enumerate(m)}


@dataclass(frozen=True)
class OracleAdmission:
    which: str
    matched: int
    worst_relative_error: float
    admitted: bool


def admit_qw_oracle(which: str, tau=2j, n: int = 10, tol: float = 1e-8, ctx: NumericContext = DEFAULT_CONTEXT) -> OracleAdmission:
    """Compare the q,w expansion's Laurent coefficients with the Eisenstein-built ones."""
    ref = laurent_coefficients_numeric(which, tau, n, ctx)
    radius = 0.5 * shortest_period(tau)
    got = qw_coefficients_fft(which, tau, radius, ctx=ctx)
    worst = 0.0
    for m, want in ref.items():
        worst = max(worst, abs(got.get(m, 0) - want) / max(1.0, abs(want)))
    return OracleAdmission(which, len(ref), worst, worst <= tol and len(ref) >= 10)


# --- sampling ----------------------------------------------------------------

def is_evaluable(tau, z, ctx: NumericContext = DEFAULT_CONTEXT) -> bool:
    try:
        generator_values(tau, z, ctx)
    except DomainError:
        return False
    return True


def sample_points(
    n: int,
    seed: int = 0,
    A: Optional[JacobiGroupElement] = None,
    ctx: NumericContext = DEFAULT_CONTEXT,
    min_im: float = 0.85,
    max_tries: int = 20000,
) -> List[SamplePoint]:
    """Seeded points where both (tau, z) and A.(tau, z) can be evaluated.

    tau is drawn near the imaginary axis with Im tau >= min_im and the image
    point must satisfy the same bound; z is drawn with |Im z| <= Im tau / 2.
    """
    rng = random.Random(f"pts:{seed}:{A}")
    out: List[SamplePoint] = []
    for _ in range(max_tries):
        if len(out) == n:
            break
        tau = complex(rng.uniform(-0.6, 0.6), rng.uniform(min_im, 1.4))
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5) * tau.imag)
        if A is not None and A.lam:
            # keep the translated point inside the strip
            z = complex(z.real, -0.5 * A.lam * tau.imag + rng.uniform(-0.15, 0.15) * tau.imag)
        if not is_evaluable(tau, z, ctx):
            continue
        if A is not None:
            t2, z2 = group_action(A, tau, z)
            if t2.imag < min_im or not is_evaluable(t2, z2, ctx):
                continue
        out.append(SamplePoint(tau, z))
    if len(out) < n:
        raise DomainError(f"could only find {len(out)} of {n} evaluable sample points")
    return out


# --- finite differences ------------------------------------------------------

def fd_dz(f: Form, tau, z, h: float = 1e-5, ctx: NumericContext = DEFAULT_CONTEXT) -> complex:
    return (eval_form(f, tau, z + h, ctx) - eval_form(f, tau, z - h, ctx)) / (2 * h)


def fd_dtau(f: Form, tau, z, h: float = 1e-5, ctx: NumericContext = DEFAULT_CONTEXT) -> complex:
    """Numeric (pi / 2i) d/dtau."""
    raw = (eval_form(f, tau + h, z, ctx) - eval_form(f, tau - h, z, ctx)) / (2 * h)
    return math.pi / 2j * raw


def fd_residual(f: Form, tau, z, variable: str = "z", ctx: NumericContext = DEFAULT_CONTEXT, h: float = 1e-5) -> float:
    """Relative gap between a central difference and the symbolic derivative."""
    from .calculus import dtau, dz

    if variable == "z":
        numeric, exact = fd_dz(f, tau, z, h, ctx), eval_form(dz(f), tau, z, ctx)
    else:
        numeric, exact = fd_dtau(f, tau, z, h, ctx), eval_form(dtau(f), tau, z, ctx)
    return _relative(abs(numeric - exact), exact)
