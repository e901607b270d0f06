"""Acceptance criteria 1-7 at full size.

Each ``criterion_N`` returns ``(ok, detail)``. Under pytest the summary
lines are printed in an "acceptance criteria" section; run this file as a
script to print them directly.
"""

import json
import random
import sys
from fractions import Fraction

import pytest

import conftest
from qjacobi import analytic as an
from qjacobi import dimensions as dm
from qjacobi.algebra import (
    C,
    E1,
    E2,
    E4,
    GENERATORS,
    P,
    PZ,
    ZERO,
    Subalgebra,
    basis_monomials,
    e6,
    in_modular,
    in_subalgebra,
    q_op,
    random_homogeneous,
    random_modular,
    random_with_depth,
)
from qjacobi.brackets import (
    associativity_defect,
    e1_exchange_defect,
    rc_bracket,
    rc_d_bracket,
    transvectant,
    tv_recurrence_defect,
)
from qjacobi.calculus import (
    d_deriv,
    delta,
    dtau,
    dz,
    eisenstein,
    oberdieck,
    raw_dtau,
    raw_dz,
    theta,
)
from qjacobi.cli import parse
from qjacobi.cli.main import main as cli_main

F = Fraction
NAMES = {
    1: "identity suite",
    2: "derivation algebra",
    3: "bracket stability",
    4: "deformation property",
    5: "dimensions",
    6: "analytic residuals",
    7: "command line",
}


def _failures(checks):
    return [name for name, ok in checks if not ok]


# --- 1 ---------------------------------------------------------------------------

def criterion_1():
    checks = [
        ("dtau(E4)", dtau(E4) == E4 * E2 - F(7, 2) * e6()),
        ("dtau(e6)", dtau(e6()) == F(3, 2) * e6() * E2 - F(15, 7) * E4**2),
        ("Ob(P)", oberdieck(P) == -2 * (P**2 - 10 * E4)),
        ("Ob(Pz)", oberdieck(PZ) == -3 * P * PZ),
        ("Ob(E4)", oberdieck(E4) == -14 * e6()),
        ("Ob(E1)", oberdieck(E1) == F(1, 2) * PZ - E1 * E2),
        ("Ob(E2)", oberdieck(E2) == -(E2**2) - 5 * E4),
        ("e8", eisenstein(8) == F(3, 7) * E4**2),
        ("cubic", PZ**2 - 4 * P**3 + 60 * E4 * P + 140 * e6() == ZERO),
    ]
    bad = _failures(checks)
    return not bad, f"{len(checks) - len(bad)}/{len(checks)} exact identities" + (f"; failed {bad}" if bad else "")


# --- 2 ---------------------------------------------------------------------------

def _depth_pairs(f):
    return {(m.e2, m.e1) for m, _ in f.items()}


def _within(f, bounds):
    return all(any(a <= b1 and b <= b2 for b1, b2 in bounds) for a, b in _depth_pairs(f))


def criterion_2():
    rng = random.Random(2)
    failures = []
    for i in range(50):
        f = random_homogeneous(rng.randint(0, 8), "JSinf", rng.randrange(1 << 30), terms=4)
        g = random_homogeneous(rng.randint(0, 8), "JSinf", rng.randrange(1 << 30), terms=4)
        for name, D in (("dz", dz), ("dtau", dtau), ("d", d_deriv), ("theta", theta)):
            if D(f * g) != D(f) * g + f * D(g):
                failures.append(f"Leibniz {name} #{i}")
    for g in GENERATORS:
        if dtau(dz(g)) != dz(dtau(g)):
            failures.append(f"commute on {g}")
    ob4 = lambda h: F(1, 4) * oberdieck(h)
    for i in range(20):
        f = random_homogeneous(rng.randint(0, 10), "JSinf", rng.randrange(1 << 30), terms=5)
        f = f + random_homogeneous(rng.randint(0, 6), "JSinf", rng.randrange(1 << 30), terms=3)
        if dtau(dz(f)) != dz(dtau(f)):
            failures.append(f"commute #{i}")
        if delta(theta(f)) - theta(delta(f)) != theta(f):
            failures.append(f"delta/theta #{i}")
        if delta(ob4(f)) - ob4(delta(f)) != ob4(f):
            failures.append(f"delta/Ob #{i}")
    profiles = 0
    for s1 in range(4):
        for s2 in range(4):
            lo = 2 * s1 + s2
            ks = [k for k in range(max(lo, 1), 17) if basis_monomials(k - lo, "JS")]
            for i in range(20):
                k = rng.choice(ks)
                f = random_with_depth(k, s1, s2, rng, terms=2)
                if not _within(dz(f), [(s1 + 1, s2 - 1), (s1, s2)]):
                    failures.append(f"dz depth {s1},{s2}")
                if not _within(dtau(f), [(s1 + 1, s2), (s1, s2 + 1)]):
                    failures.append(f"dtau depth {s1},{s2}")
                if not _within(oberdieck(f), [(s1 + 1, s2)]):
                    failures.append(f"Ob depth {s1},{s2}")
                for j1 in range(s1 + 2):
                    for j2 in range(s2 + 2):
                        Qf = q_op(j1, j2, f)
                        if q_op(j1, j2, raw_dz(f)) != raw_dz(Qf) + (j2 + 1) * q_op(j1 - 1, j2 + 1, f):
                            failures.append(f"Q dz ({j1},{j2}) on depth {s1},{s2}")
                        if q_op(j1, j2, raw_dtau(f)) != (
                            raw_dtau(Qf) + raw_dz(q_op(j1, j2 - 1, f)) + (k - j1 + 1) * q_op(j1 - 1, j2, f)
                        ):
                            failures.append(f"Q dtau ({j1},{j2}) on depth {s1},{s2}")
                        if q_op(j1, j2, oberdieck(f)) != (
                            4 * dtau(Qf) + E1 * dz(Qf) - k * E2 * Qf
                            + C * (j1 + j2 - 1) * q_op(j1 - 1, j2, f)
                            + (j2 + 1) * E1 * q_op(j1 - 1, j2 + 1, f)
                        ):
                            failures.append(f"Q Ob ({j1},{j2}) on depth {s1},{s2}")
            profiles += 1
    detail = f"50 Leibniz pairs x 4 derivations, 20 commutator forms, {profiles} depth profiles x 20 forms"
    return not failures, detail + (f"; {len(failures)} failures, first {failures[:3]}" if failures else "")


# --- 3 ---------------------------------------------------------------------------

def criterion_3():
    rng = random.Random(3)
    failures = []
    cases = (
        ("RC on JS0inf", rc_bracket, Subalgebra.JS0inf),
        ("RC_d on JS", rc_d_bracket, Subalgebra.JS),
        ("TV on JSinf0", transvectant, Subalgebra.JSinf0),
        ("RC_d on JSinf0", rc_d_bracket, Subalgebra.JSinf0),
    )
    for name, br, alg in cases:
        for n in range(1, 5):
            for _ in range(20):
                ks = [k for k in range(0, 13) if basis_monomials(k, alg)]
                f = random_homogeneous(rng.choice(ks), alg, rng.randrange(1 << 30), terms=3)
                g = random_homogeneous(rng.choice(ks), alg, rng.randrange(1 << 30), terms=3)
                if not in_subalgebra(br(n, f, g), alg):
                    failures.append(f"{name} n={n}")
    for n in range(1, 5):
        for _ in range(20):
            f = random_homogeneous(rng.choice([0, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]), Subalgebra.JSinf0, rng.randrange(1 << 30), terms=3)
            if not in_subalgebra(transvectant(n, f, E1), Subalgebra.JSinf0):
                failures.append(f"TV(f, E1) n={n}")
    w1 = rc_bracket(1, E4, P)
    if in_subalgebra(w1, "JSinf0") or in_subalgebra(w1, "JS"):
        failures.append("witness [E4,P]_1")
    if in_subalgebra(rc_d_bracket(1, E1, E4), "JS0inf"):
        failures.append("witness [[E1,E4]]_1")
    if in_subalgebra(transvectant(1, E4, P), "JS0inf"):
        failures.append("witness {E4,P}_1")
    mk = [4, 6, 8, 10, 12]
    for n in range(1, 5):
        for _ in range(20):
            f = random_modular(rng.choice(mk), rng.randrange(1 << 30))
            g = random_modular(rng.choice(mk), rng.randrange(1 << 30))
            rc = rc_bracket(n, f, g)
            if rc != rc_d_bracket(n, f, g) or not in_modular(rc):
                failures.append(f"RC/RC_d on M n={n}")
            if transvectant(n, f, g):
                failures.append(f"TV on M n={n}")
    detail = "4 families x n=1..4 x 20 pairs, 80 TV(f,E1), 3 witnesses, 80 modular pairs"
    return not failures, detail + (f"; failures {failures[:5]}" if failures else "")


# --- 4 ---------------------------------------------------------------------------

def criterion_4():
    rng = random.Random(4)
    failures = []
    for fam, order in (("TV", 4), ("RC", 3), ("RC_d", 3)):
        for i in range(20):
            f, g, h = (random_homogeneous(rng.randint(1, 8), "JSinf", rng.randrange(1 << 30), terms=2) for _ in range(3))
            defect = associativity_defect(order, f, g, h, fam)
            bad = [n for n, x in enumerate(defect) if x]
            if bad:
                failures.append(f"{fam} #{i} orders {bad}")
    for i in range(20):
        f = random_homogeneous(rng.randint(0, 8), "JSinf", rng.randrange(1 << 30), terms=2)
        g = random_homogeneous(rng.randint(0, 8), "JSinf", rng.randrange(1 << 30), terms=2)
        for n in range(0, 4):
            if tv_recurrence_defect(n, f, g):
                failures.append(f"TV recurrence n={n} #{i}")
        for n in range(1, 4):
            if e1_exchange_defect(n, f, g):
                failures.append(f"E1 exchange n={n} #{i}")
    detail = "20 triples per family (TV to hbar^4, RC and RC_d to hbar^3), 20 pairs for both identities n<=3"
    return not failures, detail + (f"; failures {failures[:5]}" if failures else "")


# --- 5 ---------------------------------------------------------------------------

def criterion_5():
    checks = []
    table = [dm.ds_closed(k) for k in (0, 1, 2, 4, 6, 8, 10, 12)]
    checks.append(("table", table == [1, 0, 1, 2, 3, 4, 5, 7]))
    for which in Subalgebra:
        reports = dm.dimension_reports(which, 100)
        checks.append((f"routes {which.value}", all(r.agree for r in reports) and len(reports) == 101))
    checks.append(("recurrences", dm.ds_recurrences_check(200)))
    checks.append(("Alcuin", dm.ds_vs_alcuin_check(500)))
    checks.append(("compact", dm.compact_formula_check(300)))
    bad = _failures(checks)
    return not bad, f"{len(checks) - len(bad)}/{len(checks)} dimension checks" + (f"; failed {bad}" if bad else "")


# --- 6 ---------------------------------------------------------------------------

def criterion_6():
    ctx = an.DEFAULT_CONTEXT
    rng = random.Random(6)
    forms = list(GENERATORS) + [
        random_homogeneous(rng.randint(1, 8), "JSinf", rng.randrange(1 << 30), terms=4) for _ in range(10)
    ]
    worst_t = 0.0
    for A in an.STANDARD_ELEMENTS.values():
        pts = an.sample_points(5, 6, A, ctx)
        worst_t = max(worst_t, max(an.transformation_residual(f, A, pts, ctx) for f in forms))
    pts = an.sample_points(10, 60, None, ctx)
    elems = list(an.STANDARD_ELEMENTS.values())
    worst_c = max(an.cocycle_relation_residual(A, B, pts) for A in elems for B in elems)
    dual_pts = [an.SamplePoint(2j, 0.3)] + [p for p in pts if abs(p.z) < 0.3 * an.shortest_period(p.tau)]
    worst_d = max(an.dual_representation_residual(w, dual_pts, ctx) for w in ("wp", "Pz", "E1"))
    e6_i = abs(an.eval_eisenstein(6, 1j, ctx))
    e6_gap = max(abs(an.eval_form(e6(), p.tau, p.z, ctx) - an.eval_eisenstein(6, p.tau, ctx)) for p in pts[:5])
    worst_fd = max(
        an.fd_residual(f, p.tau, p.z, var, ctx) for f in forms[:8] for p in pts[:5] for var in ("z", "tau")
    )
    checks = [
        ("transformation", worst_t <= 1e-8),
        ("cocycle", worst_c <= 1e-10),
        ("dual", worst_d <= 1e-10),
        ("e6(i)", e6_i <= 1e-8),
        ("e6 form", e6_gap <= 1e-8),
        ("finite differences", worst_fd <= 1e-5),
    ]
    bad = _failures(checks)
    detail = (
        f"transformation {worst_t:.1e}, cocycle {worst_c:.1e}, dual {worst_d:.1e}, "
        f"e6(i) {e6_i:.1e}, e6 form {e6_gap:.1e}, fd {worst_fd:.1e}"
    )
    return not bad, detail + (f"; failed {bad}" if bad else "")


# --- 7 ---------------------------------------------------------------------------

def criterion_7(tmpdir):
    import os

    rng = random.Random(7)
    trips = 0
    for _ in range(100):
        f = random_homogeneous(rng.randint(0, 12), "JSinf", rng.randrange(1 << 30), terms=6)
        f = f * C ** rng.randint(-2, 2)
        trips += parse(str(f)) == f
    out = os.path.join(tmpdir, "verify.jsonl")
    code = cli_main(["verify", "--suite", "all", "--json", "--out", out])
    with open(out) as fh:
        recs = [json.loads(line) for line in fh]
    status_ok = (code == 0) == all(r["pass"] for r in recs) and code in (0, 1)
    dims_out = os.path.join(tmpdir, "dims.txt")
    dcode = cli_main(["dims", "--route", "all", "--kmax", "100", "--out", dims_out])
    with open(dims_out) as fh:
        lines = fh.read().splitlines()
    dims_ok = dcode == 0 and lines[-1] == "all routes agree: True" and len(lines) == 103
    ok = trips == 100 and status_ok and dims_ok and code == 0
    detail = f"round trip {trips}/100, verify exit {code} over {len(recs)} records, dims table {len(lines) - 2} rows agree={dims_ok}"
    return ok, detail


# --- pytest wiring ---------------------------------------------------------------

def _record(n, result):
    ok, detail = result
    conftest.ACCEPTANCE_LINES[n] = f"criterion {n} ({NAMES[n]}): {'PASS' if ok else 'FAIL'}  {detail}"
    print(conftest.ACCEPTANCE_LINES[n])
    assert ok, detail


@pytest.mark.parametrize("n", range(1, 7))
def test_criterion(n):
    _record(n, globals()[f"criterion_{n}"]())


def test_criterion_7(tmp_path):
    _record(7, criterion_7(str(tmp_path)))


if __name__ == "__main__":
    import tempfile

    failed = 0
    for n in range(1, 8):
        if n == 7:
            with tempfile.TemporaryDirectory() as d:
                ok, detail = criterion_7(d)
        else:
            ok, detail = globals()[f"criterion_{n}"]()
        failed += not ok
        print(f"criterion {n} ({NAMES[n]}): {'PASS' if ok else 'FAIL'}  {detail}")
    sys.exit(1 if failed else 0)
