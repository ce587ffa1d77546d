"""Compare the numba and numpy backends of the integer kernels.

Run with ``python3 benchmarks/bench_kernels.py``.  Both backends must agree
on every input; timings exclude the first (compiling) call.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from contact_type import _kernels


def _inputs(rng, n, gens, degree):
    lead = rng.integers(0, degree + 1, size=(gens, n)).astype(np.int64)
    pure = np.eye(n, dtype=np.int64) * degree
    lead = np.vstack([lead, pure])
    bounds = [degree] * n
    grid = np.indices(bounds).reshape(n, -1).T.astype(np.int64)
    exps = rng.integers(0, degree + 1, size=(200, n)).astype(np.int64)
    weights = rng.integers(-1, 6, size=(400, n)).astype(np.int64)
    return lead, bounds, grid, exps, weights


def _time(fn, repeat):
    fn()
    start = time.perf_counter()
    for _ in range(repeat):
        out = fn()
    return (time.perf_counter() - start) / repeat, out


def run(n=3, gens=12, degree=14, repeat=5, seed=0):
    rng = np.random.default_rng(seed)
    lead, bounds, grid, exps, weights = _inputs(rng, n, gens, degree)
    jobs = {
        "staircase_count": lambda: _kernels.staircase_count(lead, bounds),
        "divisible_mask": lambda: _kernels.divisible_mask(grid, lead),
        "weighted_orders": lambda: _kernels.weighted_orders(exps, weights),
    }
    rows = []
    for name, job in jobs.items():
        results = {}
        for backend in (True, False):
            if backend and not _kernels.NUMBA_AVAILABLE:
                continue
            _kernels.set_backend(backend)
            results[backend] = _time(job, repeat)
        _kernels.set_backend(_kernels.NUMBA_AVAILABLE)
        outs = [np.asarray(r[1]) for r in results.values()]
        agree = all(np.array_equal(outs[0], o) for o in outs[1:])
        rows.append((name, results.get(True, (None,))[0], results[False][0], agree))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=3)
    ap.add_argument("--gens", type=int, default=12)
    ap.add_argument("--degree", type=int, default=14)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rows = run(args.n, args.gens, args.degree, args.repeat)
    print(f"{'kernel':<18}{'numba (ms)':>12}{'numpy (ms)':>12}{'agree':>8}")
    for name, nb, npy, agree in rows:
        nb_s = f"{nb * 1e3:.3f}" if nb is not None else "n/a"
        print(f"{name:<18}{nb_s:>12}{npy * 1e3:>12.3f}{str(agree):>8}")
    if not all(r[3] for r in rows):
        raise SystemExit("backends disagree")


if __name__ == "__main__":
    main()
