"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N] [--json]

Times three workloads on both backends and checks that they give identical
results: a sparse product, one Leibniz derivation pass, and an end-to-end
bracket computation (the backend is swapped under the algebra layer).
"""

import argparse
import contextlib
import json
import sys
import timeit

from qjacobi import kernels
from qjacobi.algebra import Subalgebra, random_homogeneous
from qjacobi.brackets import associativity_defect, transvectant
from qjacobi.calculus import DTAU


@contextlib.contextmanager
def backend(module):
    saved = kernels.mul, kernels.derive
    kernels.mul, kernels.derive = module.mul, module.derive
    try:
        yield
    finally:
        kernels.mul, kernels.derive = saved


def workloads():
    f = random_homogeneous(14, Subalgebra.JSinf, seed=1)
    g = random_homogeneous(12, Subalgebra.JSinf, seed=2)
    images = tuple(img.terms for img in DTAU.images)
    a, b, c = (random_homogeneous(k, Subalgebra.JSinf, seed=k, terms=3) for k in (3, 4, 5))
    return {
        "mul (weight 14 x 12)": lambda impl: impl.mul(f.terms, g.terms),
        "derive dtau (weight 14)": lambda impl: impl.derive(f.terms, images),
        "transvectant n=3": lambda impl: _with(impl, lambda: transvectant(3, f, g)),
        "TV associativity to hbar^3": lambda impl: _with(impl, lambda: associativity_defect(3, a, b, c, "TV")),
    }


def _with(impl, fn):
    with backend(impl):
        return fn()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    impls = {"python": kernels.load("python")[1]}
    try:
        impls["compiled"] = kernels.load("compiled")[1]
    except ImportError:
        print("compiled kernel not built; timing the fallback only", file=sys.stderr)

    rows = []
    for name, work in workloads().items():
        results = {k: work(impl) for k, impl in impls.items()}
        if len(results) == 2 and results["python"] != results["compiled"]:
            raise SystemExit(f"backends disagree on {name}")
        times = {k: min(timeit.repeat(lambda: work(impl), number=1, repeat=args.repeat)) for k, impl in impls.items()}
        rows.append({"workload": name, **{f"{k}_s": v for k, v in times.items()}})

    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    cols = list(impls)
    print(f"{'workload':<30}" + "".join(f"{c + ' (ms)':>16}" for c in cols) + ("   speedup" if len(cols) == 2 else ""))
    for r in rows:
        line = f"{r['workload']:<30}" + "".join(f"{1e3 * r[c + '_s']:>16.2f}" for c in cols)
        if len(cols) == 2:
            line += f"{r['python_s'] / r['compiled_s']:>9.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
