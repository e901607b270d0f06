"""Batch verification suites behind ``qjacobi verify``.

Each check yields a :class:`Record`. Suites are seeded and deterministic;
records come out in a fixed order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional

from .. import analytic as an
from ..algebra import (
    E1,
    E2,
    E4,
    GENERATORS,
    P,
    PZ,
    ZERO,
    Form,
    e6,
    Subalgebra,
    in_modular,
    in_subalgebra,
    random_homogeneous,
    random_modular,
)
from ..brackets import (
    BracketFamily,
    associativity_defect,
    e1_exchange_defect,
    rc_bracket,
    rc_d_bracket,
    transvectant,
    tv_recurrence_defect,
)
from ..calculus import (
    d_deriv,
    delta,
    dtau,
    dz,
    eisenstein,
    oberdieck,
    theta,
)
from .. import dimensions as dm


@dataclass
class Record:
    command: str
    inputs: Dict[str, object]
    result: object
    passed: bool
    residual: Optional[float] = None

    def to_json(self) -> Dict[str, object]:
        out = {"command": self.command, "inputs": self.inputs, "result": self.result}
        if self.residual is not None:
            out["residual"] = self.residual
        out["pass"] = self.passed
        return out


SUITES = ("identities", "stability", "associativity", "dimensions", "analytic")


def _exact(name: str, lhs: Form, rhs: Form, **inputs) -> Record:
    diff = lhs - rhs
    return Record("verify", {"check": name, **inputs}, str(diff) if diff else "0", not diff)


def identities(seed: int, count: int, ctx) -> Iterator[Record]:
    F = Fraction
    yield _exact("dtau(E4) = E4*E2 - 7/2*e6", dtau(E4), E4 * E2 - F(7, 2) * e6())
    yield _exact("dtau(e6) = 3/2*e6*E2 - 15/7*E4^2", dtau(e6()), F(3, 2) * e6() * E2 - F(15, 7) * E4**2)
    yield _exact("ob(P) = -2*(P^2 - 10*E4)", oberdieck(P), -2 * (P**2 - 10 * E4))
    yield _exact("ob(Pz) = -3*P*Pz", oberdieck(PZ), -3 * P * PZ)
    yield _exact("ob(E4) = -14*e6", oberdieck(E4), -14 * e6())
    yield _exact("ob(E1) = 1/2*Pz - E1*E2", oberdieck(E1), F(1, 2) * PZ - E1 * E2)
    yield _exact("ob(E2) = -E2^2 - 5*E4", oberdieck(E2), -(E2**2) - 5 * E4)
    yield _exact("e8 = 3/7*E4^2", eisenstein(8), F(3, 7) * E4**2)
    yield _exact("Pz^2 - 4*P^3 + 60*E4*P + 140*e6 = 0", PZ**2 - 4 * P**3 + 60 * E4 * P + 140 * e6(), ZERO)
    rng = random.Random(seed)
    for i in range(count):
        f = random_homogeneous(rng.randint(1, 7), Subalgebra.JSinf, rng.randrange(1 << 30), terms=4)
        g = random_homogeneous(rng.randint(1, 7), Subalgebra.JSinf, rng.randrange(1 << 30), terms=4)
        for name, D in (("dz", dz), ("dtau", dtau), ("d", d_deriv), ("theta", theta)):
            yield _exact(f"Leibniz {name}", D(f * g), D(f) * g + f * D(g), sample=i)
        yield _exact("[dtau, dz] = 0", dtau(dz(f)), dz(dtau(f)), sample=i)
        yield _exact("delta theta - theta delta = theta", delta(theta(f)) - theta(delta(f)), theta(f), sample=i)


def _member(f: Form, which) -> bool:
    return in_subalgebra(f, which)


def stability(seed: int, count: int, ctx) -> Iterator[Record]:
    rng = random.Random(seed)
    cases = (
        ("rc keeps JS0inf", rc_bracket, Subalgebra.JS0inf),
        ("rc_d keeps JS", rc_d_bracket, Subalgebra.JS),
        ("tv keeps JSinf0", transvectant, Subalgebra.JSinf0),
        ("rc_d keeps JSinf0", rc_d_bracket, Subalgebra.JSinf0),
    )
    for name, br, alg in cases:
        for i in range(count):
            n = 1 + i % 4
            f = random_homogeneous(rng.randint(2, 6), alg, rng.randrange(1 << 30), terms=3)
            g = random_homogeneous(rng.randint(2, 6), alg, rng.randrange(1 << 30), terms=3)
            out = br(n, f, g)
            yield Record("verify", {"check": name, "n": n, "f": str(f), "g": str(g)}, "member" if _member(out, alg) else "not member", _member(out, alg))
    for i in range(count):
        n = 1 + i % 4
        f = random_homogeneous(rng.randint(2, 6), Subalgebra.JSinf0, rng.randrange(1 << 30), terms=3)
        out = transvectant(n, f, E1)
        yield Record("verify", {"check": "tv(f, E1) in JSinf0", "n": n, "f": str(f)}, _member(out, Subalgebra.JSinf0), _member(out, Subalgebra.JSinf0))
    witnesses = (
        ("[E4,P]_1 outside JSinf0 and JS", rc_bracket(1, E4, P), (Subalgebra.JSinf0, Subalgebra.JS)),
        ("[[E1,E4]]_1 outside JS0inf", rc_d_bracket(1, E1, E4), (Subalgebra.JS0inf,)),
        ("{E4,P}_1 outside JS0inf", transvectant(1, E4, P), (Subalgebra.JS0inf,)),
    )
    for name, value, algs in witnesses:
        outside = not any(_member(value, a) for a in algs)
        yield Record("verify", {"check": name}, str(value), outside)
    for i in range(count):
        n = 1 + i % 4
        f = random_modular(rng.choice((4, 6, 8)), rng.randrange(1 << 30))
        g = random_modular(rng.choice((4, 6, 8)), rng.randrange(1 << 30))
        rc, rcd, tv = rc_bracket(n, f, g), rc_d_bracket(n, f, g), transvectant(n, f, g)
        ok = rc == rcd and in_modular(rc) and not tv
        yield Record("verify", {"check": "brackets on M", "n": n}, {"rc==rc_d": rc == rcd, "in M": in_modular(rc), "tv zero": not tv}, ok)


def associativity(seed: int, count: int, ctx) -> Iterator[Record]:
    rng = random.Random(seed)
    for fam, order in ((BracketFamily.TV, 4), (BracketFamily.RC, 3), (BracketFamily.RC_d, 3)):
        for i in range(count):
            f, g, h = (random_homogeneous(rng.randint(1, 4), Subalgebra.JSinf, rng.randrange(1 << 30), terms=2) for _ in range(3))
            defect = associativity_defect(order, f, g, h, fam)
            bad = [n for n, x in enumerate(defect) if x]
            yield Record("verify", {"check": f"associativity {fam.value}", "order": order, "sample": i}, {"nonzero_orders": bad}, not bad)
    for i in range(count):
        f = random_homogeneous(rng.randint(1, 5), Subalgebra.JSinf, rng.randrange(1 << 30), terms=3)
        g = random_homogeneous(rng.randint(1, 5), Subalgebra.JSinf, rng.randrange(1 << 30), terms=3)
        for n in range(0, 4):
            d = tv_recurrence_defect(n, f, g)
            yield Record("verify", {"check": "tv recurrence", "n": n, "sample": i}, str(d) if d else "0", not d)
        for n in range(1, 4):
            d = e1_exchange_defect(n, f, g)
            yield Record("verify", {"check": "E1 exchange identity", "n": n, "sample": i}, str(d) if d else "0", not d)


def dimensions(seed: int, count: int, ctx, kmax: int = 100) -> Iterator[Record]:
    table = [dm.ds_closed(k) for k in (0, 1, 2, 4, 6, 8, 10, 12)]
    yield Record("verify", {"check": "JS table"}, table, table == [1, 0, 1, 2, 3, 4, 5, 7])
    for which in Subalgebra:
        reports = dm.dimension_reports(which, kmax)
        bad = [r.k for r in reports if not r.agree]
        yield Record("verify", {"check": "route agreement", "algebra": which.value, "kmax": kmax}, {"disagree_at": bad}, not bad)
    yield Record("verify", {"check": "JS recurrences", "kmax": 200}, None, dm.ds_recurrences_check(200))
    yield Record("verify", {"check": "Alcuin", "kmax": 500}, None, dm.ds_vs_alcuin_check(500))
    yield Record("verify", {"check": "compact formulas", "kmax": 300}, None, dm.compact_formula_check(300))


def analytic(seed: int, count: int, ctx) -> Iterator[Record]:
    tol = ctx.tol
    for which in ("wp", "Pz", "E1"):
        adm = an.admit_qw_oracle(which, ctx=ctx)
        yield Record("verify", {"check": "q,w oracle admission", "function": which}, {"matched": adm.matched}, adm.admitted, adm.worst_relative_error)
    rng = random.Random(seed)
    for name, A in an.STANDARD_ELEMENTS.items():
        pts = an.sample_points(count, seed, A, ctx)
        forms = list(GENERATORS) + [
            random_homogeneous(rng.randint(1, 6), Subalgebra.JSinf, rng.randrange(1 << 30), terms=4) for _ in range(2)
        ]
        r = max(an.transformation_residual(f, A, pts, ctx) for f in forms)
        yield Record("verify", {"check": "transformation law", "element": name}, None, r <= max(tol, 1e-8), r)
    pts = an.sample_points(count, seed + 1, None, ctx)
    elems = list(an.STANDARD_ELEMENTS.values())
    r = max(an.cocycle_relation_residual(A, B, pts) for A in elems for B in elems)
    yield Record("verify", {"check": "cocycle relations"}, None, r <= 1e-10, r)
    dual_pts = [an.SamplePoint(2j, 0.3)] + [p for p in pts if abs(p.z) < 0.3 * an.shortest_period(p.tau)]
    for which in ("wp", "E1"):
        r = an.dual_representation_residual(which, dual_pts, ctx)
        yield Record("verify", {"check": "dual representation", "function": which}, None, r <= 1e-10, r)
    r = abs(an.eval_eisenstein(6, 1j, ctx))
    yield Record("verify", {"check": "e6(i) = 0"}, None, r <= 1e-8, r)
    r = max(abs(an.eval_form(e6(), p.tau, p.z, ctx) - an.eval_eisenstein(6, p.tau, ctx)) for p in pts)
    yield Record("verify", {"check": "e6 form = e6 series"}, None, r <= 1e-8, r)
    f = random_homogeneous(4, Subalgebra.JSinf, seed, terms=4)
    rz = max(an.fd_residual(f, p.tau, p.z, "z", ctx) for p in pts)
    rt = max(an.fd_residual(f, p.tau, p.z, "tau", ctx) for p in pts)
    yield Record("verify", {"check": "finite difference dz"}, None, rz <= 1e-5, rz)
    yield Record("verify", {"check": "finite difference dtau"}, None, rt <= 1e-5, rt)


_RUNNERS: Dict[str, Callable] = {
    "identities": identities,
    "stability": stability,
    "associativity": associativity,
    "dimensions": dimensions,
    "analytic": analytic,
}


def run_suite(name: str, seed: int = 0, count: int = 5, ctx=None) -> List[Record]:
    ctx = ctx or an.NumericContext.from_env()
    names = SUITES if name == "all" else (name,)
    out: List[Record] = []
    for suite in names:
        if suite not in _RUNNERS:
            raise ValueError(f"unknown suite {suite!r}")
        for rec in _RUNNERS[suite](seed, count, ctx):
            rec.inputs = {"suite": suite, **rec.inputs}
            out.append(rec)
    return out
