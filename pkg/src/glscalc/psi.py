"""Generating functions psi(p) on exponent intervals, and the GLS norm.

A generating function is a positive function on an exponent interval,
extended by +infinity outside it. The associated norm of a measured
moment table is sup_p moment(p) / psi(p), with the convention
``c / inf == 0``. The degenerate form, finite at a single exponent r,
recovers the classical single-exponent norm.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    EmptyDomainError,
    EmptyIntersectionError,
    InsufficientGridError,
    InvalidParameterError,
)

INF = math.inf


# ---------------------------------------------------------------------------
# domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PInterval:
    """An exponent interval [lower, upper] with open/closed endpoint flags.

    A point interval (lower == upper, both endpoints closed) is allowed so
    that degenerate generating functions have a well-formed domain.
    """

    lower: float
    upper: float
    lower_closed: bool = True
    upper_closed: bool = False

    def __post_init__(self) -> None:
        if self.lower < 1.0:
            raise InvalidParameterError(f"interval lower bound {self.lower} < 1")
        if self.lower > self.upper:
            raise InvalidParameterError("empty interval: lower > upper")
        if self.lower == self.upper and not (self.lower_closed and self.upper_closed):
            raise InvalidParameterError("point interval must be closed on both sides")
        if self.upper_closed and math.isinf(self.upper):
            raise InvalidParameterError("a closed upper endpoint must be finite")

    def contains(self, p: float) -> bool:
        if p < self.lower or (p == self.lower and not self.lower_closed):
            return False
        if p > self.upper or (p == self.upper and not self.upper_closed):
            return False
        return True

    def intersect(self, other: "PInterval") -> "PInterval":
        lo, lc = max(
            (self.lower, not self.lower_closed), (other.lower, not other.lower_closed)
        )
        hi, uc = min(
            (self.upper, self.upper_closed), (other.upper, other.upper_closed)
        )
        lc = not lc
        if lo > hi or (lo == hi and not (lc and uc)):
            raise EmptyDomainError("interval intersection is empty")
        return PInterval(lo, hi, lc, uc)


# ---------------------------------------------------------------------------
# moment tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentTable:
    """Sampled p -> |f|_p values, strictly increasing in p."""

    entries: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise InvalidParameterError("moment table is empty")
        prev = 0.0
        for p, m in self.entries:
            if p < 1.0:
                raise InvalidParameterError(f"moment exponent {p} < 1")
            if p <= prev:
                raise InvalidParameterError("moment exponents must strictly increase")
            if not math.isfinite(m) or m < 0.0:
                raise InvalidParameterError(f"moment value {m} must be finite and >= 0")
            prev = p
        self._warn_if_log_convexity_violated()

    def _warn_if_log_convexity_violated(self, tol: float = 1e-7) -> None:
        # p * ln m(p) should be convex on probability spaces; finite data is
        # noisy, so this is advisory only.
        pts = [(p, p * math.log(m)) for p, m in self.entries if m > 0.0]
        worst = 0.0
        for (p0, h0), (p1, h1), (p2, h2) in zip(pts, pts[1:], pts[2:]):
            d2 = 2.0 * (((h2 - h1) / (p2 - p1)) - ((h1 - h0) / (p1 - p0))) / (p2 - p0)
            worst = min(worst, d2)
        scale = max(1.0, max((abs(h) for _, h in pts), default=1.0))
        if -worst > tol * scale:
            warnings.warn(
                f"moment table violates log-convexity by {-worst:.3e}",
                stacklevel=3,
            )

    @property
    def p_min(self) -> float:
        return self.entries[0][0]

    @property
    def p_max(self) -> float:
        return self.entries[-1][0]

    def interpolate(self, p: float) -> float:
        """Interpolated moment at p: linear in (1/p, ln moment), exact at nodes.

        Between nodes this is the Lyapunov interpolation bound
        m(p) <= m(p0)**(1-t) * m(p1)**t with 1/p = (1-t)/p0 + t/p1, which
        holds on every measure space, so the interpolant never
        underestimates the true moment. Returns +inf outside the hull.
        """
        if p < self.p_min or p > self.p_max:
            return INF
        ps = [e[0] for e in self.entries]
        ms = [e[1] for e in self.entries]
        # binary search for the bracketing segment
        lo, hi = 0, len(ps) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ps[mid] <= p:
                lo = mid
            else:
                hi = mid
        if p == ps[lo]:
            return ms[lo]
        if p == ps[hi]:
            return ms[hi]
        t = (1.0 / ps[lo] - 1.0 / p) / (1.0 / ps[lo] - 1.0 / ps[hi])
        if ms[lo] == 0.0 or ms[hi] == 0.0:
            return 0.0
        return math.exp((1.0 - t) * math.log(ms[lo]) + t * math.log(ms[hi]))

    def scaled(self, c: float) -> "MomentTable":
        return MomentTable(tuple((p, c * m) for p, m in self.entries))


# ---------------------------------------------------------------------------
# generating functions
# ---------------------------------------------------------------------------

class PsiFunction:
    """Base class: evaluation is finite inside the domain, +inf outside."""

    domain: PInterval

    def _value(self, p: float) -> float:  # pragma: no cover - abstract
        raise NotImplementedError

    def __call__(self, p: float) -> float:
        if p < 1.0 or not self.domain.contains(p):
            return INF
        return self._value(p)


@dataclass(frozen=True)
class PowerPsi(PsiFunction):
    """psi(p) = beta * p**gamma."""

    beta: float
    gamma: float
    domain: PInterval = field(default_factory=lambda: PInterval(1.0, INF))

    def __post_init__(self) -> None:
        if self.beta <= 0.0:
            raise InvalidParameterError("beta must be > 0")
        if self.gamma < 0.0:
            raise InvalidParameterError("gamma must be >= 0")

    def _value(self, p: float) -> float:
        return self.beta * p ** self.gamma


@dataclass(frozen=True)
class RationalPsi(PsiFunction):
    """psi(p) = beta * p**gamma / (p - 1)**delta, on (1, inf) when delta > 0."""

    beta: float
    gamma: float
    delta: float
    domain: PInterval = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.beta <= 0.0:
            raise InvalidParameterError("beta must be > 0")
        if self.gamma < 0.0 or self.delta < 0.0:
            raise InvalidParameterError("gamma and delta must be >= 0")
        if self.domain is None:
            closed = self.delta == 0.0
            object.__setattr__(self, "domain", PInterval(1.0, INF, closed, False))

    def _value(self, p: float) -> float:
        if p <= 1.0 and self.delta > 0.0:
            return INF
        den = (p - 1.0) ** self.delta if self.delta > 0.0 else 1.0
        return self.beta * p ** self.gamma / den


@dataclass(frozen=True)
class WindowPsi(PsiFunction):
    """psi(p) = c0 * (p - a)**(-c) * (b - p)**(-s), on (a, b)."""

    c0: float
    a: float
    b: float
    c: float
    s: float

    def __post_init__(self) -> None:
        if self.c0 <= 0.0:
            raise InvalidParameterError("window constant must be > 0")
        if not (1.0 <= self.a < self.b < INF):
            raise InvalidParameterError("window requires 1 <= a < b < inf")
        if self.c < 0.0 or self.s < 0.0:
            raise InvalidParameterError("window powers must be >= 0")

    @property
    def domain(self) -> PInterval:
        return PInterval(self.a, self.b, False, False)

    def _value(self, p: float) -> float:
        return self.c0 * (p - self.a) ** (-self.c) * (self.b - p) ** (-self.s)


@dataclass(frozen=True)
class DegeneratePsi(PsiFunction):
    """psi(r) = 1 and +inf elsewhere; embeds the single-exponent norm."""

    r: float

    def __post_init__(self) -> None:
        if self.r < 1.0:
            raise InvalidParameterError("degenerate exponent must be >= 1")

    @property
    def domain(self) -> PInterval:
        return PInterval(self.r, self.r, True, True)

    def _value(self, p: float) -> float:
        return 1.0


@dataclass(frozen=True)
class NaturalPsi(PsiFunction):
    """psi built from measured moments; dominates them between nodes."""

    table: MomentTable

    @property
    def domain(self) -> PInterval:
        return PInterval(self.table.p_min, max(self.table.p_max, self.table.p_min),
                         True, True)

    def _value(self, p: float) -> float:
        return self.table.interpolate(p)


@dataclass(frozen=True)
class ProductPsi(PsiFunction):
    """Pointwise product of two generating functions, inf absorbing."""

    left: PsiFunction
    right: PsiFunction

    @property
    def domain(self) -> PInterval:
        return self.left.domain.intersect(self.right.domain)

    def __call__(self, p: float) -> float:
        a = self.left(p)
        b = self.right(p)
        if math.isinf(a) or math.isinf(b):
            return INF
        return a * b

    def _value(self, p: float) -> float:
        return self(p)


@dataclass(frozen=True)
class ScaledPsi(PsiFunction):
    """c * psi(p) for a positive constant c."""

    c: float
    base: PsiFunction

    def __post_init__(self) -> None:
        if self.c <= 0.0 or not math.isfinite(self.c):
            raise InvalidParameterError("scale must be positive and finite")

    @property
    def domain(self) -> PInterval:
        return self.base.domain

    def _value(self, p: float) -> float:
        return self.c * self.base(p)


@dataclass(frozen=True)
class FactorPsi(PsiFunction):
    """factor(p) * psi(p) for a positive p-dependent multiplier."""

    base: PsiFunction
    factor: Callable[[float], float]
    label: str = "factor"

    @property
    def domain(self) -> PInterval:
        return self.base.domain

    def _value(self, p: float) -> float:
        return self.factor(p) * self.base(p)


class LayerInfimumPsi(PsiFunction):
    """A generating function defined by a per-p layer minimization.

    The evaluator may return +inf inside the declared domain when the layer
    at that p is empty. Values are memoized per query exponent; the memo is
    lock-protected so evaluations may run from several threads.
    """

    def __init__(
        self,
        domain: PInterval,
        evaluator: Callable[[float], float],
        label: str = "layer-infimum",
    ) -> None:
        self.domain = domain
        self.label = label
        self._evaluator = evaluator
        self._memo: dict[float, float] = {}
        self._lock = threading.Lock()

    def _value(self, p: float) -> float:
        with self._lock:
            if p in self._memo:
                return self._memo[p]
        v = self._evaluator(p)
        with self._lock:
            self._memo[p] = v
        return v

    def __repr__(self) -> str:
        return f"LayerInfimumPsi({self.label!r}, domain={self.domain})"


# ---------------------------------------------------------------------------
# constructors and operations
# ---------------------------------------------------------------------------

def _narrow(default: PInterval, spec: Mapping) -> PInterval:
    if "domain" not in spec:
        return default
    lo, hi = spec["domain"][0], spec["domain"][1]
    lc = bool(spec["domain"][2]) if len(spec["domain"]) > 2 else True
    uc = bool(spec["domain"][3]) if len(spec["domain"]) > 3 else False
    return default.intersect(PInterval(float(lo), float(hi), lc, uc))


def make_psi(spec: Mapping) -> PsiFunction:
    """Build a generating function from a form descriptor.

    Recognized kinds: power, rational, window, degenerate, natural,
    product, scaled. A ``domain`` entry narrows the maximal interval of
    finiteness.
    """
    kind = spec.get("kind")
    if kind == "power":
        psi = PowerPsi(float(spec.get("beta", 1.0)), float(spec["gamma"]))
        return PowerPsi(psi.beta, psi.gamma, _narrow(psi.domain, spec))
    if kind == "rational":
        psi = RationalPsi(
            float(spec.get("beta", 1.0)), float(spec.get("gamma", 0.0)),
            float(spec["delta"]),
        )
        return RationalPsi(psi.beta, psi.gamma, psi.delta, _narrow(psi.domain, spec))
    if kind == "window":
        return WindowPsi(
            float(spec.get("c", 1.0)), float(spec["a"]), float(spec["b"]),
            float(spec.get("cl", 0.0)), float(spec.get("sl", 0.0)),
        )
    if kind == "degenerate":
        return DegeneratePsi(float(spec["r"]))
    if kind == "natural":
        table = spec["table"]
        if not isinstance(table, MomentTable):
            table = MomentTable(tuple((float(p), float(m)) for p, m in table))
        return NaturalPsi(table)
    if kind == "product":
        return ProductPsi(make_psi(spec["left"]), make_psi(spec["right"]))
    if kind == "scaled":
        return ScaledPsi(float(spec["c"]), make_psi(spec["base"]))
    raise InvalidParameterError(f"unknown psi kind {kind!r}")


def eval_psi(psi: PsiFunction, p: float) -> float:
    """Evaluate psi at p >= 1; +inf outside the domain."""
    if p < 1.0:
        raise InvalidParameterError(f"exponent {p} < 1")
    return psi(p)


def gls_norm(moments: MomentTable, psi: PsiFunction) -> float:
    """sup over the table's p-grid of moment(p) / psi(p), with c/inf == 0."""
    if isinstance(psi, DegeneratePsi):
        m = moments.interpolate(psi.r)
        if math.isinf(m):
            raise EmptyIntersectionError(
                f"degenerate exponent {psi.r} outside the moment table hull"
            )
        return m
    best = None
    for p, m in moments.entries:
        w = psi(p)
        if math.isinf(w):
            continue
        ratio = m / w
        best = ratio if best is None else max(best, ratio)
    if best is None:
        raise EmptyIntersectionError("no table exponent lies in the psi domain")
    return best


def check_h_convexity(
    psi: PsiFunction, grid: Sequence[float], tol: float = 1e-9
) -> tuple[bool, float]:
    """Convexity check of h(p) = p * ln psi(p) via second divided differences.

    Returns (flag, worst violation); the flag is true when the maximal
    negative second difference stays within ``tol`` relative to the scale
    of h on the grid. Points where psi is infinite are skipped; with fewer
    than three usable points the check passes vacuously.
    """
    if len(grid) < 3:
        raise InsufficientGridError("need at least 3 grid points")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise InvalidParameterError("grid must be sorted")
    pts = []
    for p in grid:
        v = psi(p)
        if math.isfinite(v):
            if not pts or p > pts[-1][0]:
                pts.append((p, p * math.log(v)))
    if len(pts) < 3:
        return True, 0.0
    worst = 0.0
    for (p0, h0), (p1, h1), (p2, h2) in zip(pts, pts[1:], pts[2:]):
        d2 = 2.0 * (((h2 - h1) / (p2 - p1)) - ((h1 - h0) / (p1 - p0))) / (p2 - p0)
        worst = min(worst, d2)
    violation = max(0.0, -worst)
    scale = max(1.0, max(abs(h) for _, h in pts))
    return violation <= tol * scale, violation


def moments_from_pairs(pairs: Iterable[tuple[float, float]]) -> MomentTable:
    return MomentTable(tuple((float(p), float(m)) for p, m in pairs))
