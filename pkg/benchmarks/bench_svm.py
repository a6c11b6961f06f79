"""Time the SVM dual coordinate-descent epoch under each available backend.

    python3 benchmarks/bench_svm.py --rows 3000 --features 2000 --repeat 3

Both backends run the same problem with the same seed; the script checks
that they agree before printing timings.
"""

import argparse
import time

import numpy as np
import scipy.sparse as sp

from langbias.models import svm_fit
from langbias.models._kernels import KERNELS


def make_problem(rows: int, features: int, density: float, seed: int):
    rng = np.random.default_rng(seed)
    X = sp.random(rows, features, density=density, random_state=seed, format="csr")
    w = rng.normal(size=features)
    y = (X @ w + 0.1 * rng.normal(size=rows) > 0).astype(np.int64)
    return X, y


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rows", type=int, default=3000)
    p.add_argument("--features", type=int, default=2000)
    p.add_argument("--density", type=float, default=0.01)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    X, y = make_problem(args.rows, args.features, args.density, args.seed)
    print(f"problem: {args.rows} x {args.features}, nnz={X.nnz}, C={args.c}")
    results = {}
    for name in KERNELS:
        times = []
        for _ in range(args.repeat):
            start = time.perf_counter()
            model = svm_fit(X, y, c_param=args.c, backend=name)
            times.append(time.perf_counter() - start)
        results[name] = (min(times), model)
        meta = model.training_meta
        print(f"{name:>8}: best of {args.repeat} {min(times):8.4f} s  epochs={meta['iterations']}  "
              f"dual={meta['dual_objective']:.10g}")

    if len(results) == 2:
        (t_fast, a), (t_slow, b) = results["cython"], results["python"]
        agree = np.allclose(a.weights, b.weights, rtol=0, atol=1e-10) and abs(a.bias - b.bias) < 1e-10
        print(f"backends agree: {agree}; speedup {t_slow / t_fast:.1f}x")
    else:
        print("compiled backend not built; only the Python kernel was timed")


if __name__ == "__main__":
    main()
