"""Compare the compiled and fallback associativity kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each case times the full basis-triple associativity residual (c, c, c, c)
on one structure-constant tensor with both backends and checks they agree.
"""
import argparse
import json
import timeit

import numpy as np

from quasistar import kernels
from quasistar.models import (
    build_function_model,
    build_group_algebra,
    build_matrix_algebra,
    build_symmetric_group_algebra,
)
from quasistar.tensor import build_tensor_pair


def cases():
    yield "grid[32]", build_function_model(32).alg.structure_constants
    yield "grid[64]", build_function_model(64).alg.structure_constants
    yield "C[Z_16]", build_group_algebra(16).alg.structure_constants
    yield "C[S_4]", build_symmetric_group_algebra(4).alg.structure_constants
    yield "M_4", build_matrix_algebra(4).alg.structure_constants
    tp = build_tensor_pair(build_group_algebra(3), build_symmetric_group_algebra(3))
    yield "C[Z_3] (x) C[S_3]", tp.alg.structure_constants
    rng = np.random.default_rng(0)
    yield "dense random d=12", rng.standard_normal((12, 12, 12)) + 1j * rng.standard_normal((12, 12, 12))


def best_time(fn, c, repeat):
    timer = timeit.Timer(lambda: fn(c, c, c, c))
    n, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=n)) / n


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write the rows here")
    args = ap.parse_args()
    if not kernels.HAVE_COMPILED:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation` first")

    rows = []
    print(f"{'case':<22}{'dim':>5}{'cython [ms]':>14}{'python [ms]':>14}{'speedup':>10}{'|diff|':>11}")
    for name, c in cases():
        fast = kernels.triple_product_residual_compiled(c, c, c, c)
        slow = kernels.triple_product_residual_py(c, c, c, c)
        t_cy = best_time(kernels.triple_product_residual_compiled, c, args.repeat)
        t_py = best_time(kernels.triple_product_residual_py, c, args.repeat)
        row = {
            "case": name,
            "dim": c.shape[0],
            "cython_ms": 1e3 * t_cy,
            "python_ms": 1e3 * t_py,
            "speedup": t_py / t_cy,
            "diff": abs(fast - slow),
        }
        rows.append(row)
        print(
            f"{name:<22}{row['dim']:>5}{row['cython_ms']:>14.3f}{row['python_ms']:>14.3f}"
            f"{row['speedup']:>9.1f}x{row['diff']:>11.1e}"
        )
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
