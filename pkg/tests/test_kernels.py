import random

import pytest
from hypothesis import given, strategies as st

from qjacobi import _pykernels, kernels
from qjacobi._rational import Q
from qjacobi.kernels import CBIAS, UNITS

try:
    from qjacobi import _ckernels
except ImportError:  # pragma: no cover - extension not built
    _ckernels = None

needs_compiled = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def _random_poly(rng, n, maxexp=4):
    out = {}
    for _ in range(n):
        key = CBIAS + sum(rng.randint(0, maxexp) * u for u in UNITS) + (rng.randint(-2, 2) << 50)
        out[key] = Q(rng.randint(-20, 20), rng.randint(1, 7))
    return {k: v for k, v in out.items() if v}


poly_seeds = st.tuples(st.integers(0, 10**6), st.integers(0, 25))


def test_backend_selection():
    name, mod = kernels.load("python")
    assert name == "python" and mod is _pykernels
    assert kernels.BACKEND in ("python", "compiled")


def test_python_mul_identity_and_zero():
    f = {CBIAS + UNITS[0]: Q(3)}
    assert _pykernels.mul(f, {CBIAS: Q(1)}) == f
    assert _pykernels.mul(f, {}) == {}


def test_c_exponent_bias_in_product():
    c = CBIAS + (1 << 50)
    cinv = CBIAS - (1 << 50)
    assert _pykernels.mul({c: Q(2)}, {cinv: Q(1, 2)}) == {CBIAS: Q(1)}


def test_cancellation_drops_zero_terms():
    x = CBIAS + UNITS[0]
    out = _pykernels.mul({x: Q(1), CBIAS: Q(1)}, {x: Q(1), CBIAS: Q(-1)})
    assert out == {x + x - CBIAS: Q(1), CBIAS: Q(-1)}


@needs_compiled
@given(poly_seeds, poly_seeds)
def test_compiled_mul_matches_python(a, b):
    f = _random_poly(random.Random(a[0]), a[1])
    g = _random_poly(random.Random(b[0]), b[1])
    assert _ckernels.mul(f, g) == _pykernels.mul(f, g)


@needs_compiled
@given(poly_seeds, st.integers(0, 10**6))
def test_compiled_derive_matches_python(a, seed):
    rng = random.Random(seed)
    f = _random_poly(random.Random(a[0]), a[1])
    images = tuple(_random_poly(rng, rng.randint(0, 4)) for _ in range(5))
    assert _ckernels.derive(f, images) == _pykernels.derive(f, images)


@needs_compiled
def test_compiled_accepts_non_mpq_coefficients():
    from fractions import Fraction

    f = {CBIAS + UNITS[1]: Fraction(1, 3)}
    assert _ckernels.mul(f, {CBIAS: 3}) == {CBIAS + UNITS[1]: Q(1)}


def test_benchmark_runs_and_backends_agree(capsys):
    import importlib.util
    import json
    import pathlib

    path = pathlib.Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    assert bench.main(["--repeat", "1", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 4 and all(r["python_s"] > 0 for r in rows)
