"""Deterministic scalar minimizers: grid scan plus golden-section refinement.

All solvers here are derivative-free and use fixed schedules so repeated
runs produce identical results. Objectives may return ``math.inf`` for
infeasible points; infinities are skipped during scans and a golden
refinement is only attempted around a finite bracket.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Sequence

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    max_iter: int = 300,
) -> tuple[float, float]:
    """Minimize a unimodal f on [lo, hi]; returns (x, f(x))."""
    a, b = float(lo), float(hi)
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= rel_tol * max(1.0, abs(a), abs(b)):
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INVPHI * (b - a)
            f2 = f(x2)
    if f1 <= f2:
        return x1, f1
    return x2, f2


def _grid(lo: float, hi: float, n: int, log: bool) -> list[float]:
    if n < 2:
        return [lo]
    if log and lo > 0.0:
        la, lb = math.log(lo), math.log(hi)
        return [math.exp(la + (lb - la) * i / (n - 1)) for i in range(n)]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def grid_refine_min(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    n: int = 512,
    log: bool = False,
    extra: Iterable[float] = (),
    rel_tol: float = 1e-10,
) -> tuple[float, float]:
    """Scan a fixed grid (plus caller candidates), refine the best bracket.

    Returns (min value, argmin); (inf, nan) when every point is infeasible.
    """
    xs = _grid(lo, hi, n, log)
    xs.extend(x for x in extra if lo <= x <= hi)
    xs.sort()
    vals = [f(x) for x in xs]
    best = min(range(len(xs)), key=lambda i: vals[i])
    if math.isinf(vals[best]):
        return math.inf, math.nan
    a = xs[best - 1] if best > 0 else xs[best]
    b = xs[best + 1] if best + 1 < len(xs) else xs[best]
    if a < b and math.isfinite(vals[max(best - 1, 0)]) and math.isfinite(
        vals[min(best + 1, len(xs) - 1)]
    ):
        x, v = golden_section_min(f, a, b, rel_tol=rel_tol)
        if v < vals[best]:
            return v, x
    return vals[best], xs[best]


def bisect_root(
    f: Callable[[float], float], lo: float, hi: float, iters: int = 100
) -> float:
    """Root of f by bisection; f(lo) and f(hi) must have opposite signs."""
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (flo < 0.0) == (fm < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def constrained_product_min(
    log_weight: Callable[[float], float],
    d: int,
    total: float,
    rel_tol: float = 1e-8,
    max_sweeps: int = 200,
) -> tuple[float, list[float]]:
    """Minimize sum_i log_weight(x_i) subject to sum x_i = total, 0 < x_i < 1.

    Pairwise redistribution by cyclic coordinate descent from the symmetric
    starting point. Returns (exp of the minimal sum, argmin x-vector).
    """
    tiny = 1e-12
    if d == 1:
        return math.exp(log_weight(total)), [total]
    x = [total / d] * d
    for _ in range(max_sweeps):
        moved = 0.0
        for i in range(d):
            for j in range(i + 1, d):
                s = x[i] + x[j]
                lo = max(tiny, s - (1.0 - tiny))
                hi = min(1.0 - tiny, s - tiny)
                if lo >= hi:
                    continue

                def pair(t: float, s: float = s) -> float:
                    return log_weight(t) + log_weight(s - t)

                _, t = grid_refine_min(pair, lo, hi, n=128, rel_tol=rel_tol * 1e-2)
                if math.isnan(t):
                    continue
                moved = max(moved, abs(t - x[i]))
                x[i], x[j] = t, s - t
        if moved <= rel_tol * max(1.0, total):
            break
    return math.exp(sum(log_weight(xi) for xi in x)), x
