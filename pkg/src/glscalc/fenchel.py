"""Exponential tail bounds from generating functions via convex conjugation.

The moment-growth function h(p) = p * ln psi(p) is conjugated over the
declared exponent domain, h*(v) = sup_p (p v - h(p)), and a Chernoff-style
bound exp(-h*(ln(y / norm))) follows for levels y at or above the norm.
The canonical power family psi(p) = p**gamma admits a closed form, and the
fit in the opposite direction recovers (gamma, norm) from an observed tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BelowValidityError,
    DegenerateFitError,
    InsufficientPointsError,
    InvalidParameterError,
)
from .minimize import golden_section_min
from .psi import INF, DegeneratePsi, PsiFunction


@dataclass(frozen=True)
class TailCurve:
    """A nonincreasing map level y -> tail value t, sampled at sorted levels."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        prev_y = 0.0
        prev_t = INF
        for y, t in self.points:
            if y <= prev_y:
                raise InvalidParameterError("levels must be positive and increasing")
            if t < 0.0:
                raise InvalidParameterError("tail values must be >= 0")
            if t > prev_t * (1.0 + 1e-12):
                raise InvalidParameterError("tail values must be nonincreasing")
            prev_y, prev_t = y, t


def _h(psi: PsiFunction, p: float) -> float:
    v = psi(p)
    if math.isinf(v):
        return INF
    return p * math.log(v)


def _objective(psi: PsiFunction, v: float):
    def phi(p: float) -> float:
        h = _h(psi, p)
        if math.isinf(h):
            return -INF
        return p * v - h

    return phi


def conjugate_with_argmax(
    psi: PsiFunction, v: float, rel_tol: float = 1e-10
) -> tuple[float, float]:
    """h*(v) over the psi domain, with the maximizing exponent.

    Dense log-spaced scan plus golden-section refinement; for unbounded
    domains the bracket grows geometrically (factor 4, up to 10 times) and
    sustained growth at the far edge is reported as a divergent supremum.
    """
    dom = psi.domain
    if isinstance(psi, DegeneratePsi):
        return psi.r * v - _h(psi, psi.r), psi.r
    phi = _objective(psi, v)
    lo = dom.lower
    if math.isfinite(dom.upper):
        return _scan_max(phi, lo, dom.upper, rel_tol)
    hi = max(2.0 * lo, lo + 1.0)
    best = (-INF, math.nan)
    for _ in range(10):
        best = _scan_max(phi, lo, hi, rel_tol)
        # interior maximum found: the far edge is not the argmax
        if not (best[1] >= hi * 0.95):
            return best
        hi *= 4.0
    # still growing after 10 geometric expansions: treat as divergent
    return INF, INF


def _scan_max(phi, lo: float, hi: float, rel_tol: float) -> tuple[float, float]:
    n = 512
    if lo > 0.0:
        xs = np.exp(np.linspace(math.log(max(lo, 1e-300)), math.log(hi), n))
    else:
        xs = np.linspace(lo, hi, n)
    xs[0], xs[-1] = lo, hi
    vals = [phi(x) for x in xs]
    i = max(range(n), key=lambda k: vals[k])
    if math.isinf(vals[i]) and vals[i] < 0:
        return -INF, math.nan
    a = xs[i - 1] if i > 0 else xs[i]
    b = xs[i + 1] if i + 1 < n else xs[i]
    if a < b:
        x, negv = golden_section_min(lambda p: -phi(p), a, b, rel_tol=rel_tol)
        if -negv >= vals[i]:
            return -negv, x
    return vals[i], float(xs[i])


def fenchel_conjugate(psi: PsiFunction, v: float) -> float:
    """sup over the psi domain of p*v - p*ln(psi(p)); extended-value total."""
    return conjugate_with_argmax(psi, v)[0]


def tail_bound(psi: PsiFunction, norm: float, y: float) -> float:
    """Chernoff-style tail bound exp(-h*(ln(y/norm))), valid for y >= norm."""
    if norm <= 0.0:
        raise InvalidParameterError("norm must be > 0")
    if y < norm:
        raise BelowValidityError(f"level {y} below the validity threshold {norm}")
    hstar = fenchel_conjugate(psi, math.log(y / norm))
    if math.isinf(hstar):
        return 0.0
    return min(1.0, math.exp(-hstar))


def power_tail_closed_form(gamma: float, k: float, y: float) -> float:
    """exp(-gamma * e**-1 * (y/k)**(1/gamma)) for the power family, y >= k."""
    if gamma <= 0.0 or k <= 0.0:
        raise InvalidParameterError("gamma and k must be > 0")
    if y < k:
        raise BelowValidityError(f"level {y} below the validity threshold {k}")
    return math.exp(-gamma * math.exp(-1.0) * (y / k) ** (1.0 / gamma))


def fit_power_psi_from_tail(tail: TailCurve) -> tuple[float, float, float]:
    """Recover (gamma, k) of a power-family tail from observed (y, t) points.

    Linearizes ln(-ln t) = (1/gamma) ln y - (1/gamma) ln k + ln(gamma/e)
    over points with 0 < t <= 1/2 and fits by least squares. Returns
    (gamma estimate, k estimate, rms residual); the unspecified absolute
    constant of the inverse statement is absorbed into k.
    """
    used = [(y, t) for y, t in tail.points if 0.0 < t <= 0.5]
    if len(used) < 3:
        raise InsufficientPointsError(
            f"need >= 3 points with 0 < t <= 0.5, got {len(used)}"
        )
    x = np.log([y for y, _ in used])
    w = np.log([-math.log(t) for _, t in used])
    if float(np.ptp(x)) <= 0.0:
        raise DegenerateFitError("zero variance in ln y")
    slope, intercept = np.polyfit(x, w, 1)
    if slope <= 1e-9:
        raise DegenerateFitError("tail does not decay with level")
    gamma = 1.0 / float(slope)
    ln_k = gamma * (math.log(gamma / math.e) - float(intercept))
    resid = float(np.sqrt(np.mean((w - (slope * x + intercept)) ** 2)))
    return gamma, math.exp(ln_k), resid


def read_tail_curve(text: str) -> TailCurve:
    """Parse the ``glstail v1`` text format."""
    from .formats import parse_tail

    return parse_tail(text)
