"""Integer-exponent kernels: monomial divisibility and staircase counting.

Each kernel has a numba ``@njit`` body and a pure-numpy twin.  Set
``CONTACT_TYPE_NUMBA=0`` to force the numpy path (numba is also skipped
when it is not importable).
"""

from __future__ import annotations

import os

import numpy as np

_WANT_NUMBA = os.environ.get("CONTACT_TYPE_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return decorator


USE_NUMBA = NUMBA_AVAILABLE


# numba kernels


@njit(cache=True)
def _divisible_mask_nb(points, lead):
    out = np.zeros(points.shape[0], dtype=np.bool_)
    n = points.shape[1]
    for p in range(points.shape[0]):
        for g in range(lead.shape[0]):
            ok = True
            for j in range(n):
                if lead[g, j] > points[p, j]:
                    ok = False
                    break
            if ok:
                out[p] = True
                break
    return out


@njit(cache=True)
def _staircase_count_nb(lead, bounds):
    # walk the box prod(bounds) like an odometer; count points no generator divides
    n = bounds.shape[0]
    point = np.zeros(n, dtype=np.int64)
    count = 0
    total = 1
    for j in range(n):
        total *= bounds[j]
    for _ in range(total):
        hit = False
        for g in range(lead.shape[0]):
            ok = True
            for j in range(n):
                if lead[g, j] > point[j]:
                    ok = False
                    break
            if ok:
                hit = True
                break
        if not hit:
            count += 1
        j = 0
        while j < n:
            point[j] += 1
            if point[j] < bounds[j]:
                break
            point[j] = 0
            j += 1
    return count


@njit(cache=True)
def _weighted_orders_nb(exps, weights):
    # exps: (terms, n); weights: (curves, n) with -1 marking a zero component
    out = np.empty((weights.shape[0], exps.shape[0]), dtype=np.int64)
    for c in range(weights.shape[0]):
        for t in range(exps.shape[0]):
            s = 0
            for j in range(exps.shape[1]):
                e = exps[t, j]
                if e:
                    w = weights[c, j]
                    if w < 0:
                        s = -1
                        break
                    s += e * w
            out[c, t] = s
    return out


# numpy twins


def _divisible_mask_np(points, lead):
    if lead.shape[0] == 0 or points.shape[0] == 0:
        return np.zeros(points.shape[0], dtype=bool)
    return (lead[None, :, :] <= points[:, None, :]).all(axis=2).any(axis=1)


def _staircase_count_np(lead, bounds):
    n = bounds.shape[0]
    grids = np.indices(tuple(int(b) for b in bounds)).reshape(n, -1).T
    count = 0
    chunk = 1 << 16
    for start in range(0, grids.shape[0], chunk):
        block = grids[start:start + chunk]
        count += int((~_divisible_mask_np(block, lead)).sum())
    return count


def _weighted_orders_np(exps, weights):
    zero_comp = weights < 0
    w = np.where(zero_comp, 0, weights)
    orders = w @ exps.T
    killed = (zero_comp.astype(np.int64) @ (exps > 0).T.astype(np.int64)) > 0
    return np.where(killed, -1, orders)


def _as_matrix(rows, n):
    arr = np.asarray(rows, dtype=np.int64)
    return arr.reshape(-1, n)


def divisible_mask(points, lead) -> np.ndarray:
    """``out[p]`` is True when some row of ``lead`` divides row ``p`` of ``points``."""
    points = np.ascontiguousarray(points, dtype=np.int64)
    lead = np.ascontiguousarray(lead, dtype=np.int64)
    if USE_NUMBA:
        return _divisible_mask_nb(points, lead)
    return _divisible_mask_np(points, lead)


def staircase_count(lead, bounds) -> int:
    """Number of exponent vectors in the box ``[0, bounds)`` divisible by no row of ``lead``."""
    lead = np.ascontiguousarray(lead, dtype=np.int64)
    bounds = np.ascontiguousarray(bounds, dtype=np.int64)
    if bounds.size == 0:
        return 1
    if USE_NUMBA:
        return int(_staircase_count_nb(lead, bounds))
    return _staircase_count_np(lead, bounds)


def weighted_orders(exps, weights) -> np.ndarray:
    """Weighted degree of every monomial under every weight vector.

    A negative weight marks a coordinate that is identically zero; monomials
    involving it get order -1 (the term vanishes).
    """
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    if USE_NUMBA:
        return _weighted_orders_nb(exps, weights)
    return _weighted_orders_np(exps, weights)


def set_backend(numba: bool) -> None:
    """Switch between the numba and numpy paths at runtime (used by the benchmark)."""
    global USE_NUMBA
    if numba and not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not available")
    USE_NUMBA = bool(numba)
