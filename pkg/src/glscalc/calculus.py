"""Combinators that propagate generating functions through operations.

Each multivariate operation carries a domain of admissible input
exponents, an output-exponent map, and a constant; the propagated
generating function at output exponent p is the infimum of
constant * prod_i psi_i(tau_i(q_i))**alpha_i over the layer of input
exponent vectors mapped to p. Closed forms are used where the split
minimization is explicit (Hoelder and conjugate splits, sharp
convolution constant, the 2**(d/p) infimal-convolution factor, the
multiplicative Toeplitz bound); the rest are solved numerically with
deterministic schedules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    ArityMismatchError,
    ConstraintViolationError,
    EmptyDomainError,
    InvalidParameterError,
)
from .minimize import bisect_root, constrained_product_min, grid_refine_min
from .psi import (
    INF,
    DegeneratePsi,
    FactorPsi,
    LayerInfimumPsi,
    PInterval,
    ProductPsi,
    PsiFunction,
    RationalPsi,
)

_Q_MAX = 1e6


# ---------------------------------------------------------------------------
# closed-form split minima
# ---------------------------------------------------------------------------

def split_constant(gamma1: float, gamma2: float) -> float:
    """(g1+g2)**(g1+g2) / (g1**g1 * g2**g2)."""
    g = gamma1 + gamma2
    return g ** g / (gamma1 ** gamma1 * gamma2 ** gamma2)


def holder_split_min(gamma1: float, gamma2: float) -> tuple[float, float, float]:
    """Minimum of a**g1 * b**g2 over conjugate pairs 1/a + 1/b = 1.

    Returns (min value, a*, b*); the minimizers split proportionally to
    the powers, a* = (g1+g2)/g1 and b* = (g1+g2)/g2.
    """
    if gamma1 <= 0.0 or gamma2 <= 0.0:
        raise InvalidParameterError("powers must be > 0")
    g = gamma1 + gamma2
    return split_constant(gamma1, gamma2), g / gamma1, g / gamma2


def conjugate_split_min(
    gamma1: float, gamma2: float, p: float
) -> tuple[float, float, float]:
    """Minimum of p1**g1 * p2**g2 over 1/p1 + 1/p2 = 1/p.

    Returns (min value, p1*, p2*); equals the conjugate-pair minimum
    scaled by p**(g1+g2), with p_i* = p * (g1+g2) / g_i.
    """
    if gamma1 <= 0.0 or gamma2 <= 0.0:
        raise InvalidParameterError("powers must be > 0")
    if p < 1.0:
        raise InvalidParameterError("p must be >= 1")
    g = gamma1 + gamma2
    value = p ** g * split_constant(gamma1, gamma2)
    return value, p * g / gamma1, p * g / gamma2


# ---------------------------------------------------------------------------
# sharp convolution constant
# ---------------------------------------------------------------------------

def _v(p: float) -> float:
    """[p**(1/p) * (p')**(-1/p')]**(1/2), extended by continuity at 1, inf."""
    if p == 1.0 or math.isinf(p):
        return 1.0
    pc = p / (p - 1.0)
    return math.exp(0.5 * (math.log(p) / p - math.log(pc) / pc))


def beckner_constant(n: int, p1: float, p2: float) -> tuple[float, float]:
    """Sharp constant of the convolution inequality in dimension n.

    Given 1 + 1/r = 1/p1 + 1/p2, returns (r, [v(p1)v(p2)/v(r)]**n) with
    v(1) = v(inf) = 1 by continuity; r = inf is allowed when the exponent
    sum equals 1. The constant never exceeds 1.
    """
    if n < 1:
        raise InvalidParameterError("dimension must be >= 1")
    if p1 < 1.0 or p2 < 1.0:
        raise InvalidParameterError("exponents must be >= 1")
    s = (0.0 if math.isinf(p1) else 1.0 / p1) + (0.0 if math.isinf(p2) else 1.0 / p2)
    if s < 1.0 - 1e-12 or s > 2.0 + 1e-12:
        raise ConstraintViolationError(
            f"1/p1 + 1/p2 = {s} outside the admissible band [1, 2]"
        )
    r = INF if abs(s - 1.0) <= 1e-15 else 1.0 / (s - 1.0)
    g = (_v(p1) * _v(p2) / _v(r)) ** n
    return r, g


# ---------------------------------------------------------------------------
# combinators
# ---------------------------------------------------------------------------

def _degenerate_points(psi: PsiFunction) -> list[float]:
    return [psi.r] if isinstance(psi, DegeneratePsi) else []


def combine_product(psi1: PsiFunction, psi2: PsiFunction) -> PsiFunction:
    """Pointwise-product combinator: inf over conjugate splits of the pair.

    kappa(p) = inf over a, b > 1, 1/a + 1/b = 1 of psi1(a p) * psi2(b p).
    """
    if isinstance(psi1, DegeneratePsi) and isinstance(psi2, DegeneratePsi):
        s = 1.0 / psi1.r + 1.0 / psi2.r
        if 1.0 / s < 1.0:
            raise EmptyDomainError("no p >= 1 admits a feasible split")

    def kappa(p: float) -> float:
        extras = []
        for r in _degenerate_points(psi1):
            extras.append(p / r)          # a*p == r
        for r in _degenerate_points(psi2):
            extras.append(1.0 - p / r)    # b*p == r
        eps = 1e-9

        def objective(u: float) -> float:
            # u = 1/a in (0, 1); b = 1/(1 - u)
            a = psi1(p / u)
            b = psi2(p / (1.0 - u))
            if math.isinf(a) or math.isinf(b):
                return INF
            return a * b

        value, _ = grid_refine_min(objective, eps, 1.0 - eps, n=512, extra=extras)
        return value

    return LayerInfimumPsi(PInterval(1.0, INF), kappa, "product")


def combine_tensor(nu1: PsiFunction, nu2: PsiFunction) -> PsiFunction:
    """Tensor combinator: pointwise product with constant 1."""
    intersection = nu1.domain.intersect(nu2.domain)  # raises when empty
    del intersection
    return ProductPsi(nu1, nu2)


def combine_convolution(
    zeta1: PsiFunction, zeta2: PsiFunction, n: int
) -> PsiFunction:
    """Convolution combinator with the sharp constant along the layer.

    kappa(p) = inf over 1/p1 + 1/p2 = 1 + 1/p (admissible band, endpoints
    p_i = 1 by continuity) of G(p, p1, p2) * zeta1(p1) * zeta2(p2).
    """
    if n < 1:
        raise InvalidParameterError("dimension must be >= 1")

    def kappa(p: float) -> float:
        target = 1.0 + 1.0 / p

        def objective(s: float) -> float:
            # s = 1/p1 in [1/p, 1]; then 1/p2 = target - s in [1/p, 1]
            p1 = INF if s <= 0.0 else 1.0 / s
            s2 = target - s
            p2 = INF if s2 <= 0.0 else 1.0 / s2
            a = zeta1(p1)
            b = zeta2(p2)
            if math.isinf(a) or math.isinf(b):
                return INF
            _, g = beckner_constant(n, p1, p2)
            return g * a * b

        extras = []
        for r in _degenerate_points(zeta1):
            extras.append(1.0 / r)
        for r in _degenerate_points(zeta2):
            extras.append(target - 1.0 / r)
        lo = 1.0 / p
        value, _ = grid_refine_min(objective, lo, 1.0, n=512, extra=extras)
        return value

    return LayerInfimumPsi(PInterval(1.0, INF), kappa, "convolution")


def combine_infimal_convolution(
    psi: PsiFunction, d: int, m: int
) -> tuple[PsiFunction, float]:
    """Infimal-convolution combinator for the m-fold min-plus operation.

    The output generating function is m**(d/p) * psi(p), bounding the
    result against the sum of the m input norms; the accompanying p-free
    relaxed constant is m**d.
    """
    if d < 1 or m < 1:
        raise InvalidParameterError("dimension and fold count must be >= 1")
    factor = float(m) ** float(d)
    return (
        FactorPsi(psi, lambda p: float(m) ** (d / p), f"minplus-{m}fold"),
        factor,
    )


def _constrained_weight_min(
    exponent: float, d: int, p: float
) -> tuple[float, list[float]]:
    """min of prod q_i**exponent / (q_i - 1) over sum 1/q_i = 1/p."""

    def log_weight(x: float) -> float:
        # x = 1/q in (0, 1)
        q = 1.0 / x
        if q <= 1.0:
            return INF
        return exponent * math.log(q) - math.log(q - 1.0)

    value, xs = constrained_product_min(log_weight, d, 1.0 / p)
    return value, [1.0 / x for x in xs]


def combine_maximal(gamma: float, d: int, c_env: float) -> PsiFunction:
    """Rectangle-maximal combinator: c_env**d times the split minimum.

    kappa(p) = c_env**d * Z(p) with Z(p) the constrained minimum of
    prod_i p_i**(gamma+1) / (p_i - 1) over sum 1/p_i = 1/p, solved by
    coordinate descent from the symmetric point p_i = d*p.
    """
    if gamma <= 0.0:
        raise InvalidParameterError("gamma must be > 0")
    if d < 1:
        raise InvalidParameterError("arity must be >= 1")
    if c_env <= 0.0:
        raise InvalidParameterError("envelope constant must be > 0")
    scale = c_env ** d

    def kappa(p: float) -> float:
        z, _ = _constrained_weight_min(gamma + 1.0, d, p)
        return scale * z

    return LayerInfimumPsi(PInterval(1.0, INF), kappa, f"maximal-d{d}")


def maximal_split_min(gamma: float, d: int, p: float) -> tuple[float, list[float]]:
    """Z(p) for the maximal combinator, with the minimizing exponents."""
    return _constrained_weight_min(gamma + 1.0, d, p)


def maximal_envelope(gamma: float, d: int, p: float) -> float:
    """The stated closed-form envelope (d p / (d p - 1))**(d (gamma+1)).

    Coincides with the numeric split minimum at p = 1 and diverges from it
    for p > 1; reported side by side, never asserted equal.
    """
    return (d * p / (d * p - 1.0)) ** (d * (gamma + 1.0))


def combine_hausdorff(gamma: float, m: int, c_env: float) -> PsiFunction:
    """Hausdorff-bound combinator with per-factor weight q**2 / (q - 1).

    kappa(p) = c_env * Z2(p), Z2(p) the constrained minimum of
    prod_j p_j**(gamma+2) / (p_j - 1) over sum 1/p_j = 1/p. The factor
    count m plays the role of the arity in the envelope exponent
    m * (gamma + 2).
    """
    if gamma <= 0.0:
        raise InvalidParameterError("gamma must be > 0")
    if m < 1:
        raise InvalidParameterError("factor count must be >= 1")
    if c_env <= 0.0:
        raise InvalidParameterError("envelope constant must be > 0")

    def kappa(p: float) -> float:
        z, _ = _constrained_weight_min(gamma + 2.0, m, p)
        return c_env * z

    return LayerInfimumPsi(PInterval(1.0, INF), kappa, f"hausdorff-m{m}")


def hausdorff_split_min(gamma: float, m: int, p: float) -> tuple[float, list[float]]:
    """Z2(p) for the Hausdorff combinator, with the minimizing exponents."""
    return _constrained_weight_min(gamma + 2.0, m, p)


def hausdorff_envelope_exponent(gamma: float, m: int) -> float:
    """Stated growth exponent m * (gamma + 2) of the Hausdorff bound."""
    return m * (gamma + 2.0)


def combine_toeplitz(gamma1: float, gamma2: float) -> PsiFunction:
    """Multiplicative-Toeplitz combinator.

    tau(p) = split_constant(g1, g2) * (p / (p - 1))**(g1 + g2) on (1, inf);
    the underlying operator bound carries constant 1.
    """
    if gamma1 <= 0.0 or gamma2 <= 0.0:
        raise InvalidParameterError("powers must be > 0")
    g = gamma1 + gamma2
    return RationalPsi(beta=split_constant(gamma1, gamma2), gamma=g, delta=g)


def combine_bilinear_integral(
    psi1: PsiFunction,
    psi2: PsiFunction,
    kernel_norm: Callable[[float, float, float], float],
) -> PsiFunction:
    """Bilinear-integral combinator driven by a mixed kernel norm.

    kappa(p) = inf over (p1, p2) of kernel_norm(p, p1, p2) * psi1(p1)
    * psi2(p2); no constraint links the exponents beyond kernel
    finiteness. A constant bounded-kernel norm concentrated at
    p1 = p2 = p reduces this to L * psi1(p) * psi2(p).
    """

    def kappa(p: float) -> float:
        def value_at(p1: float, p2: float) -> float:
            ell = kernel_norm(p, p1, p2)
            a, b = psi1(p1), psi2(p2)
            if math.isinf(ell) or math.isinf(a) or math.isinf(b):
                return INF
            return ell * a * b

        grid = [1.0 + 0.02 * 1.25 ** k for k in range(40)]
        candidates = [(p, p)]
        candidates += [(q1, q2) for q1 in grid for q2 in grid]
        for r in _degenerate_points(psi1):
            candidates += [(r, q2) for q2 in grid] + [(r, p), (r, r)]
        for r in _degenerate_points(psi2):
            candidates += [(q1, r) for q1 in grid] + [(p, r)]
        best = INF
        best_pt = None
        for q1, q2 in candidates:
            val = value_at(q1, q2)
            if val < best:
                best, best_pt = val, (q1, q2)
        if best_pt is None:
            return INF
        # two passes of coordinate refinement around the best grid point
        q1, q2 = best_pt
        for _ in range(2):
            v1, q1n = grid_refine_min(
                lambda t: value_at(t, q2), max(1.0, q1 / 4), q1 * 4, n=128
            )
            if v1 < best and not math.isnan(q1n):
                best, q1 = v1, q1n
            v2, q2n = grid_refine_min(
                lambda t: value_at(q1, t), max(1.0, q2 / 4), q2 * 4, n=128
            )
            if v2 < best and not math.isnan(q2n):
                best, q2 = v2, q2n
        return best

    return LayerInfimumPsi(PInterval(1.0, INF), kappa, "bilinear-integral")


# ---------------------------------------------------------------------------
# generic layer infimum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperationDescriptor:
    """The data of an admissible multivariate operation.

    ``domain`` is a predicate over input exponent vectors, ``theta`` maps
    them to the output exponent, ``tau`` are the per-input moment maps,
    ``alpha`` the powers, and ``k_const`` the constant (finite exactly on
    the domain; evaluations off the domain are treated as +inf).
    """

    arity: int
    domain: Callable[[Sequence[float]], bool]
    theta: Callable[[Sequence[float]], float]
    tau: tuple[Callable[[float], float], ...]
    alpha: tuple[float, ...]
    k_const: Callable[[Sequence[float]], float]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise InvalidParameterError("arity must be >= 1")
        if len(self.tau) != self.arity or len(self.alpha) != self.arity:
            raise ArityMismatchError("tau/alpha length must equal arity")
        if any(a < 0.0 for a in self.alpha):
            raise InvalidParameterError("powers must be >= 0")


@dataclass(frozen=True)
class LayerSolution:
    """Result of a layer minimization at one output exponent."""

    p: float
    kappa: float
    argmin_q: tuple[float, ...]
    status: str  # interior | boundary | empty-layer


def _bound_value(
    desc: OperationDescriptor, psis: Sequence[PsiFunction], q: Sequence[float]
) -> float:
    if any(qi < 1.0 for qi in q) or not desc.domain(q):
        return INF
    k = desc.k_const(q)
    if math.isinf(k):
        return INF
    val = k
    for psi, t, a, qi in zip(psis, desc.tau, desc.alpha, q):
        w = psi(t(qi))
        if math.isinf(w):
            return INF
        val *= w ** a
    return val


def _solve_theta(
    theta: Callable[[float], float], p: float, n: int = 192
) -> list[float]:
    """Roots of theta(q) = p on [1, Q_MAX] by log-grid scan and bisection."""
    xs = [math.exp(math.log(_Q_MAX) * i / (n - 1)) for i in range(n)]
    xs[0] = 1.0
    roots = []
    vals = []
    for x in xs:
        try:
            vals.append(theta(x) - p)
        except (ValueError, ZeroDivisionError, OverflowError):
            vals.append(math.nan)
    for (x0, f0), (x1, f1) in zip(zip(xs, vals), zip(xs[1:], vals[1:])):
        if math.isnan(f0) or math.isnan(f1):
            continue
        if f0 == 0.0:
            roots.append(x0)
        elif (f0 < 0.0) != (f1 < 0.0):
            roots.append(bisect_root(lambda q: theta(q) - p, x0, x1))
    if vals and vals[-1] == 0.0:
        roots.append(xs[-1])
    return roots


def _status(q: Sequence[float]) -> str:
    near_edge = any(qi <= 1.0 + 1e-7 or qi >= _Q_MAX * 0.5 for qi in q)
    return "boundary" if near_edge else "interior"


def kappa_layer_infimum(
    desc: OperationDescriptor,
    psis: Sequence[PsiFunction],
    p: float,
    rel_tol: float = 1e-8,
) -> LayerSolution:
    """Minimize the propagated bound over the layer theta(q) = p.

    Arity 1 solves the constraint directly; arity 2 scans the free
    coordinate on a 512-point log grid, resolving the second from the
    constraint, with golden-section refinement; higher arities run cyclic
    coordinate descent from a symmetric feasible point.
    """
    if len(psis) != desc.arity:
        raise ArityMismatchError(
            f"descriptor arity {desc.arity} != {len(psis)} psi functions"
        )
    if p < 1.0:
        raise InvalidParameterError("p must be >= 1")
    d = desc.arity
    if d == 1:
        best = (INF, None)
        for q in _solve_theta(lambda x: desc.theta((x,)), p):
            val = _bound_value(desc, psis, (q,))
            if val < best[0]:
                best = (val, (q,))
        if best[1] is None:
            return LayerSolution(p, INF, (), "empty-layer")
        return LayerSolution(p, best[0], tuple(best[1]), _status(best[1]))

    if d == 2:
        def profile(q1: float) -> tuple[float, float]:
            roots = _solve_theta(lambda q2: desc.theta((q1, q2)), p, n=96)
            best_v, best_q2 = INF, math.nan
            for q2 in roots:
                val = _bound_value(desc, psis, (q1, q2))
                if val < best_v:
                    best_v, best_q2 = val, q2
            return best_v, best_q2

        value, q1 = grid_refine_min(
            lambda q: profile(q)[0], 1.0, _Q_MAX, n=512, log=True,
            rel_tol=rel_tol,
        )
        if math.isinf(value):
            return LayerSolution(p, INF, (), "empty-layer")
        _, q2 = profile(q1)
        q = (q1, q2)
        return LayerSolution(p, value, q, _status(q))

    # d > 2: symmetric initialization, cyclic coordinate descent with the
    # last coordinate resolved from the constraint.
    sym_roots = _solve_theta(lambda t: desc.theta((t,) * d), p)
    if not sym_roots:
        return LayerSolution(p, INF, (), "empty-layer")
    q = [sym_roots[0]] * d
    best = _bound_value(desc, psis, q)
    for _ in range(100):
        moved = 0.0
        for i in range(d - 1):
            def coord(qi: float) -> float:
                trial = list(q)
                trial[i] = qi
                roots = _solve_theta(
                    lambda qd: desc.theta(trial[:-1] + [qd]), p, n=64
                )
                vbest = INF
                for qd in roots:
                    trial[-1] = qd
                    vbest = min(vbest, _bound_value(desc, psis, trial))
                return vbest

            val, qi = grid_refine_min(coord, 1.0, _Q_MAX, n=96, log=True)
            if val < best and not math.isnan(qi):
                moved = max(moved, abs(qi - q[i]))
                q[i] = qi
                roots = _solve_theta(
                    lambda qd: desc.theta(q[:-1] + [qd]), p, n=64
                )
                best_qd, best_v = q[-1], best
                for qd in roots:
                    v = _bound_value(desc, psis, q[:-1] + [qd])
                    if v < best_v:
                        best_v, best_qd = v, qd
                q[-1] = best_qd
                best = best_v
        if moved <= rel_tol * max(1.0, max(q)):
            break
    if math.isinf(best):
        return LayerSolution(p, INF, (), "empty-layer")
    return LayerSolution(p, best, tuple(q), _status(q))


def identity_descriptor() -> OperationDescriptor:
    """d = 1 descriptor with theta = tau = id, alpha = 1, constant 1."""
    return OperationDescriptor(
        arity=1,
        domain=lambda q: True,
        theta=lambda q: q[0],
        tau=(lambda x: x,),
        alpha=(1.0,),
        k_const=lambda q: 1.0,
    )


def product_descriptor() -> OperationDescriptor:
    """d = 2 descriptor of the pointwise product via the harmonic relation."""
    return OperationDescriptor(
        arity=2,
        domain=lambda q: q[0] > 1.0 and q[1] > 1.0,
        theta=lambda q: 1.0 / (1.0 / q[0] + 1.0 / q[1]),
        tau=(lambda x: x, lambda x: x),
        alpha=(1.0, 1.0),
        k_const=lambda q: 1.0,
    )


def convolution_descriptor(n: int) -> OperationDescriptor:
    """d = 2 descriptor of convolution: theta solves 1/p1 + 1/p2 = 1 + 1/p."""

    def theta(q: Sequence[float]) -> float:
        s = 1.0 / q[0] + 1.0 / q[1] - 1.0
        if s <= 0.0:
            return INF
        return 1.0 / s

    def admissible(q: Sequence[float]) -> bool:
        s = 1.0 / q[0] + 1.0 / q[1]
        return 1.0 <= s <= 2.0

    def k_const(q: Sequence[float]) -> float:
        try:
            _, g = beckner_constant(n, q[0], q[1])
        except ConstraintViolationError:
            return INF
        return g

    return OperationDescriptor(
        arity=2,
        domain=admissible,
        theta=theta,
        tau=(lambda x: x, lambda x: x),
        alpha=(1.0, 1.0),
        k_const=k_const,
    )
