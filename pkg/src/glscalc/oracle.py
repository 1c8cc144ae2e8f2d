"""Brute-force numerical ground truth on discretized functions.

Functions live on uniform midpoint grids (or finitely supported
sequences); operations are applied literally - exhaustive min-plus scans,
direct circular convolution, rectangle averages via prefix sums - and
norms come from midpoint-rule quadrature. Nothing here is clever on
purpose: the point is an independent check of every propagated bound.

The exhaustive scans honor an operation cap (default 2**22 cell pairs),
overridable per call or through the ``GLS_MAX_CELLS`` environment
variable.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DomainMismatchError,
    IncompatibleGridsError,
    InvalidParameterError,
    MissingPeriodicityError,
    ResourceLimitError,
    UnrepresentableScaleError,
)
from .fenchel import TailCurve
from .psi import INF, MomentTable, PsiFunction

DEFAULT_MAX_CELLS = 2 ** 22

_MEASURES = ("lebesgue", "uniprob", "counting")


def _max_cells(override: int | None) -> int:
    if override is not None:
        return override
    env = os.environ.get("GLS_MAX_CELLS")
    return int(env) if env else DEFAULT_MAX_CELLS


# ---------------------------------------------------------------------------
# grid and sequence functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridFunction:
    """Samples of a function at midpoints of a uniform box grid."""

    box: tuple[tuple[float, float], ...]
    n: tuple[int, ...]
    values: np.ndarray
    periodic: bool = False
    measure: str = "lebesgue"

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != tuple(self.n):
            values = values.reshape(tuple(self.n))
        values = np.ascontiguousarray(values)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if self.measure not in _MEASURES:
            raise InvalidParameterError(f"unknown measure {self.measure!r}")
        if len(self.box) != len(self.n):
            raise IncompatibleGridsError("box and n dimensionality differ")
        for (lo, hi), ni in zip(self.box, self.n):
            if not (lo < hi) or ni < 1:
                raise InvalidParameterError("box sides need lo < hi and n >= 1")
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("grid values must be finite")

    @property
    def dims(self) -> int:
        return len(self.box)

    @property
    def size(self) -> int:
        return int(np.prod(self.n))

    def steps(self) -> tuple[float, ...]:
        return tuple((hi - lo) / ni for (lo, hi), ni in zip(self.box, self.n))

    def cell_weight(self) -> float:
        """Quadrature weight of one cell (uniform across the grid)."""
        if self.measure == "lebesgue":
            return float(np.prod([(hi - lo) / ni for (lo, hi), ni in
                                  zip(self.box, self.n)]))
        if self.measure == "uniprob":
            return 1.0 / self.size
        return 1.0  # counting

    def centers(self, axis: int = 0) -> np.ndarray:
        lo, hi = self.box[axis]
        h = (hi - lo) / self.n[axis]
        return lo + h * (np.arange(self.n[axis]) + 0.5)

    def same_layout(self, other: "GridFunction") -> bool:
        return (
            self.box == other.box
            and self.n == other.n
            and self.measure == other.measure
            and self.periodic == other.periodic
        )


@dataclass(frozen=True)
class SequenceFunction:
    """A finitely supported map from positive rational indices to values."""

    support: Mapping[Fraction, float]

    def __post_init__(self) -> None:
        cleaned = {}
        for idx, val in self.support.items():
            q = idx if isinstance(idx, Fraction) else Fraction(idx)
            if q <= 0:
                raise InvalidParameterError(f"sequence index {q} must be > 0")
            if not math.isfinite(val):
                raise InvalidParameterError("sequence values must be finite")
            cleaned[q] = float(val)
        object.__setattr__(self, "support", dict(cleaned))

    def __getitem__(self, idx) -> float:
        q = idx if isinstance(idx, Fraction) else Fraction(idx)
        return self.support.get(q, 0.0)


# ---------------------------------------------------------------------------
# norms, moments, tails
# ---------------------------------------------------------------------------

def lp_norm(f: GridFunction | SequenceFunction, p: float) -> float:
    """Quadrature L^p norm; p = inf is the max of absolute values.

    Exponents below 1 are accepted (the tensor identity holds for every
    positive power); p must be positive.
    """
    if isinstance(f, SequenceFunction):
        vals = np.array(list(f.support.values()), dtype=float)
        if vals.size == 0:
            return 0.0
        if math.isinf(p):
            return float(np.max(np.abs(vals)))
        if p <= 0.0:
            raise InvalidParameterError("p must be > 0")
        return float(np.sum(np.abs(vals) ** p) ** (1.0 / p))
    if math.isinf(p):
        return float(np.max(np.abs(f.values))) if f.size else 0.0
    if p <= 0.0:
        raise InvalidParameterError("p must be > 0")
    w = f.cell_weight()
    return float((np.sum(np.abs(f.values) ** p) * w) ** (1.0 / p))


def moments_table(
    f: GridFunction | SequenceFunction, p_grid: Sequence[float]
) -> MomentTable:
    """Table of (p, |f|_p) along a sorted exponent grid."""
    return MomentTable(tuple((float(p), lp_norm(f, float(p))) for p in p_grid))


def empirical_tail(f: GridFunction, y_grid: Sequence[float]) -> TailCurve:
    """Two-sided tail T(y) = max(measure{f > y}, measure{f < -y})."""
    w = f.cell_weight()
    pts = []
    for y in y_grid:
        if y <= 0.0:
            raise InvalidParameterError("levels must be > 0")
        above = w * float(np.count_nonzero(f.values > y))
        below = w * float(np.count_nonzero(f.values < -y))
        pts.append((float(y), max(above, below)))
    return TailCurve(tuple(pts))


# ---------------------------------------------------------------------------
# literal operations
# ---------------------------------------------------------------------------

def pointwise_product(f1: GridFunction, f2: GridFunction) -> GridFunction:
    if not f1.same_layout(f2):
        raise IncompatibleGridsError("pointwise product needs identical grids")
    return GridFunction(f1.box, f1.n, f1.values * f2.values, f1.periodic,
                        f1.measure)


def tensor_product(f1: GridFunction, f2: GridFunction) -> GridFunction:
    if f1.measure != f2.measure:
        raise IncompatibleGridsError("tensor factors need the same measure")
    values = np.multiply.outer(f1.values, f2.values)
    return GridFunction(f1.box + f2.box, f1.n + f2.n, values,
                        f1.periodic and f2.periodic, f1.measure)


def periodic_convolution(f1: GridFunction, f2: GridFunction) -> GridFunction:
    """Normalized circular convolution: box-volume-normalized Haar weight.

    Matches the torus convention (1/volume) * integral of
    f1(x - y) f2(y) dy, all shifts taken cyclically.
    """
    if not (f1.periodic and f2.periodic):
        raise MissingPeriodicityError("periodic convolution needs periodic grids")
    if not f1.same_layout(f2):
        raise IncompatibleGridsError("convolution needs identical grids")
    volume = float(np.prod([hi - lo for lo, hi in f1.box]))
    cell = float(np.prod(f1.steps()))
    out = np.zeros_like(f1.values)
    it = np.ndindex(*f2.n)
    for j in it:
        coeff = f2.values[j]
        if coeff == 0.0:
            continue
        out += coeff * np.roll(f1.values, shift=j, axis=tuple(range(f1.dims)))
    out *= cell / volume
    return GridFunction(f1.box, f1.n, out, True, f1.measure)


def infimal_convolution(
    f1: GridFunction,
    f2: GridFunction,
    max_cells: int | None = None,
) -> tuple[GridFunction, np.ndarray]:
    """Exhaustive min-plus convolution on the Minkowski-sum grid.

    Inputs are treated as +inf outside their boxes; the output cell at
    index i+j+1 collects min over j of f1[i] + f2[j]. Returns the output
    together with a boolean validity-window mask marking cells whose
    attaining shift is strictly inside the input grid (no box-edge
    truncation artifact).
    """
    if f1.periodic or f2.periodic:
        raise IncompatibleGridsError("min-plus scan expects non-periodic grids")
    if not f1.same_layout(f2):
        raise IncompatibleGridsError("min-plus needs identical grids")
    if f1.size * f2.size > _max_cells(max_cells):
        raise ResourceLimitError(
            f"min-plus scan of {f1.size * f2.size} cell pairs exceeds the cap"
        )
    d = f1.dims
    n = f1.n
    out_n = tuple(2 * ni - 1 for ni in n)
    out = np.full(out_n, np.inf)
    argmin = np.zeros(out_n + (d,), dtype=np.int64)
    for j in np.ndindex(*n):
        shifted = np.full(out_n, np.inf)
        sl = tuple(slice(ji, ji + ni) for ji, ni in zip(j, n))
        shifted[sl] = f1.values
        cand = shifted + f2.values[j]
        better = cand < out
        out = np.where(better, cand, out)
        for axis in range(d):
            argmin[..., axis] = np.where(better, j[axis], argmin[..., axis])
    # validity window: the best shift is off the global grid edge per axis
    window = np.ones(out_n, dtype=bool)
    for axis in range(d):
        j_best = argmin[..., axis]
        k_idx = np.indices(out_n)[axis]
        i_best = k_idx - j_best
        window &= (j_best > 0) & (j_best < n[axis] - 1)
        window &= (i_best > 0) & (i_best < n[axis] - 1)
    h = f1.steps()
    out_box = tuple(
        (lo1 + lo2 + hi / 2.0, hi1 + hi2 - hi / 2.0)
        for ((lo1, hi1), (lo2, hi2)), hi in zip(zip(f1.box, f2.box), h)
    )
    g = GridFunction(out_box, out_n, out, False, f1.measure)
    return g, window


def restrict_to_window(g: GridFunction, window: np.ndarray) -> GridFunction:
    """Zero out cells outside a validity window (mass simply dropped)."""
    return GridFunction(g.box, g.n, np.where(window, g.values, 0.0), g.periodic,
                        g.measure)


def _hl_maximal_1d(values: np.ndarray) -> np.ndarray:
    """Uncentered 1-D maximal function over cell-aligned intervals.

    avg[a, b] is the mean of |values[a..b]|; the maximum over intervals
    containing i is max_{a <= i} max_{b >= i} avg[a, b], computed with a
    reverse cummax along b and a forward cummax along a.
    """
    n = values.shape[0]
    absval = np.abs(values)
    prefix = np.concatenate([[0.0], np.cumsum(absval)])
    a_idx = np.arange(n)[:, None]
    b_idx = np.arange(n)[None, :]
    length = b_idx - a_idx + 1
    avg = (prefix[b_idx + 1] - prefix[a_idx]) / np.where(length > 0, length, 1)
    avg = np.where(length > 0, avg, -np.inf)
    # right[a, i] = max over b >= i of avg[a, b]
    right = np.maximum.accumulate(avg[:, ::-1], axis=1)[:, ::-1]
    # M[i] = max over a <= i of right[a, i]
    running = np.maximum.accumulate(right, axis=0)
    return running[np.arange(n), np.arange(n)]


def strong_maximal(
    fs: Sequence[GridFunction], max_cells: int | None = None
) -> GridFunction:
    """Multilinear rectangle maximal operator of one-axis inputs.

    Each input is one-dimensional; the rectangle average factors into
    per-axis interval averages, so the output on the product grid is the
    tensor product of the one-dimensional maximal functions.
    """
    if not fs:
        raise InvalidParameterError("need at least one input")
    cap = _max_cells(max_cells)
    for f in fs:
        if f.dims != 1:
            raise IncompatibleGridsError("strong maximal expects 1-d inputs")
        if f.size * f.size > cap:
            raise ResourceLimitError("interval scan exceeds the operation cap")
    out = _hl_maximal_1d(fs[0].values)
    box = fs[0].box
    n = fs[0].n
    measure = fs[0].measure
    for f in fs[1:]:
        if f.measure != measure:
            raise IncompatibleGridsError("inputs need the same measure")
        out = np.multiply.outer(out, _hl_maximal_1d(f.values))
        box = box + f.box
        n = n + f.n
    return GridFunction(box, n, out, False, measure)


def toeplitz_apply(
    f: SequenceFunction, x: SequenceFunction, n_max: int = 256
) -> SequenceFunction:
    """g_n = sum_k f(n/k) x_k over the finite supports, n = 1..n_max."""
    out: dict[Fraction, float] = {}
    for k, xv in x.support.items():
        if k.denominator != 1:
            raise InvalidParameterError("x must be supported on integers")
        for q, fv in f.support.items():
            n = q * k
            if n.denominator == 1 and 1 <= n.numerator <= n_max:
                idx = Fraction(n.numerator)
                out[idx] = out.get(idx, 0.0) + fv * xv
    return SequenceFunction(out)


def bilinear_integral_apply(
    kernel: GridFunction, f1: GridFunction, f2: GridFunction
) -> GridFunction:
    """V[f1, f2](x) = double integral of L(x, x1, x2) f1(x1) f2(x2)."""
    if kernel.dims != 3 or f1.dims != 1 or f2.dims != 1:
        raise IncompatibleGridsError("kernel must be 3-d over two 1-d inputs")
    if kernel.box[1] != f1.box[0] or kernel.n[1] != f1.n[0]:
        raise IncompatibleGridsError("kernel axis 1 does not match f1")
    if kernel.box[2] != f2.box[0] or kernel.n[2] != f2.n[0]:
        raise IncompatibleGridsError("kernel axis 2 does not match f2")
    if f1.measure != f2.measure:
        raise IncompatibleGridsError("inputs need the same measure")
    w1 = f1.cell_weight()
    w2 = f2.cell_weight()
    vals = np.einsum("xij,i,j->x", kernel.values, f1.values, f2.values)
    vals = vals * (w1 * w2)
    return GridFunction((kernel.box[0],), (kernel.n[0],), vals, False,
                        kernel.measure)


_OPERATIONS = {
    "pointwise_product": pointwise_product,
    "tensor_product": tensor_product,
    "periodic_convolution": periodic_convolution,
    "infimal_convolution": infimal_convolution,
    "strong_maximal": lambda *fs: strong_maximal(fs),
    "toeplitz": toeplitz_apply,
    "bilinear_integral": bilinear_integral_apply,
}


def apply_operation(kind: str, *inputs, **params):
    """Dispatch a literal operation by name."""
    if kind not in _OPERATIONS:
        raise InvalidParameterError(f"unknown operation {kind!r}")
    return _OPERATIONS[kind](*inputs, **params)


# ---------------------------------------------------------------------------
# mixed kernel norm, dilation, certificates
# ---------------------------------------------------------------------------

def _conjugate(p: float) -> float:
    return p / (p - 1.0)


def mixed_norm_kernel(
    kernel: GridFunction, p: float, p1: float, p2: float
) -> float:
    """Nested anisotropic norm of a trilinear kernel.

    Innermost L^{p1'} over the first input axis, then L^{p2'} over the
    second, then L^p over the output axis, each by midpoint quadrature.
    """
    if kernel.dims != 3:
        raise IncompatibleGridsError("mixed norm expects a 3-d kernel")
    if min(p, p1, p2) <= 1.0:
        raise InvalidParameterError("exponents must exceed 1 for conjugates")
    p1c, p2c = _conjugate(p1), _conjugate(p2)
    weights = []
    for (blo, bhi), ni in zip(kernel.box, kernel.n):
        if kernel.measure == "lebesgue":
            weights.append((bhi - blo) / ni)
        elif kernel.measure == "uniprob":
            weights.append(1.0 / ni)
        else:
            weights.append(1.0)
    wx, w1, w2 = weights
    inner = np.sum(np.abs(kernel.values) ** p1c, axis=1) * w1       # (x, x2)
    mid = np.sum(inner ** (p2c / p1c), axis=1) * w2                  # (x,)
    outer = np.sum(mid ** (p / p2c)) * wx
    return float(outer ** (1.0 / p))


def dilation(f: GridFunction, lam: float) -> GridFunction:
    """x -> f(lam * x) realized by rescaling the box by 1/lam.

    Sample values are unchanged; the quadrature weight rescales, so
    |T_lam f|_p = lam**(-dims/p) |f|_p holds exactly.
    """
    if f.periodic:
        raise UnrepresentableScaleError("dilation needs a non-periodic grid")
    if lam <= 0.0 or not math.isfinite(lam):
        raise UnrepresentableScaleError(f"scale {lam} not representable")
    box = tuple((lo / lam, hi / lam) for lo, hi in f.box)
    return GridFunction(box, f.n, f.values, False, f.measure)


def verify_bound(
    g: GridFunction | SequenceFunction,
    kappa: PsiFunction,
    p_grid: Sequence[float],
) -> tuple[float, float]:
    """Certificate check: max over the grid of |g|_p / kappa(p).

    Returns (max ratio, attaining p); a ratio at most 1 (plus tolerance)
    certifies the propagated bound on this corpus member.
    """
    if not p_grid:
        raise InvalidParameterError("empty p grid")
    worst = -INF
    worst_p = math.nan
    for p in p_grid:
        if not kappa.domain.contains(p):
            raise DomainMismatchError(f"p = {p} outside the bound's domain")
        k = kappa(p)
        m = lp_norm(g, p)
        ratio = 0.0 if math.isinf(k) else m / k
        if ratio > worst:
            worst, worst_p = ratio, p
    return worst, worst_p
