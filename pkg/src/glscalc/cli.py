"""Command-line front end: bound tables, tail tables, oracle verification.

Configs are TOML with a ``command`` of bound, tail, or verify; reports are
TSV with a header row and floats printed to 12 significant digits, so two
runs of the same config are byte-identical.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import calculus, corpus, oracle
from .errors import ConfigError, GLSError
from .fenchel import power_tail_closed_form, tail_bound
from .psi import (
    INF,
    MomentTable,
    NaturalPsi,
    PowerPsi,
    PsiFunction,
    ScaledPsi,
    make_psi,
)

EXIT_OK = 0
EXIT_CERT_FAIL = 1
EXIT_PARSE = 2
EXIT_VALIDATE = 3


@dataclass
class RunConfig:
    """Validated run configuration."""

    command: str
    seed: int
    operation: dict
    psi_specs: list[dict]
    inputs: list[dict]
    p_grid: tuple[float, float, int, bool]
    tail_grid: dict
    tolerance: float
    out_name: str
    psi_grid: tuple[float, float, int] = (0.0, 0.0, 0)
    raw: dict = field(default_factory=dict)


def load_config(path: str, seed: int | None, tolerance: float | None) -> RunConfig:
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib

    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc

    command = data.get("command")
    if command not in ("bound", "tail", "verify"):
        raise ConfigError(f"command must be bound|tail|verify, got {command!r}")
    grid = data.get("p_grid", {})
    pmin = float(grid.get("min", 1.0))
    pmax = float(grid.get("max", 8.0))
    count = int(grid.get("count", 16))
    log = bool(grid.get("log", True))
    if pmin < 1.0:
        raise ConfigError("p_grid.min must be >= 1")
    if count < 2:
        raise ConfigError("p_grid.count must be >= 2")
    if pmax <= pmin:
        raise ConfigError("p_grid.max must exceed p_grid.min")
    psig = data.get("psi_grid", {})
    tol = data.get("tolerances", {}).get("certificate", 1e-6)
    if tolerance is not None:
        tol = tolerance
    cfg = RunConfig(
        command=command,
        seed=int(seed if seed is not None else data.get("seed", 1)),
        operation=data.get("operation", {}),
        psi_specs=list(data.get("psi", [])),
        inputs=list(data.get("inputs", [])),
        p_grid=(pmin, pmax, count, log),
        tail_grid=data.get("tail_grid", {}),
        tolerance=float(tol),
        out_name=data.get("output", {}).get("path", f"{command}.tsv"),
        psi_grid=(
            float(psig.get("min", 1.0)),
            float(psig.get("max", 4.0 * pmax)),
            int(psig.get("count", 257)),
        ),
        raw=data,
    )
    return cfg


def _fmt(x: float) -> str:
    if x != x:
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def _p_values(cfg: RunConfig) -> list[float]:
    pmin, pmax, count, log = cfg.p_grid
    if log:
        return [float(v) for v in np.geomspace(pmin, pmax, count)]
    return [float(v) for v in np.linspace(pmin, pmax, count)]


def _build_psis(cfg: RunConfig, grids: Sequence) -> list[PsiFunction]:
    psis = []
    pmin, pmax, count = cfg.psi_grid
    table_grid = np.geomspace(max(pmin, 1.0), pmax, count)
    for i, spec in enumerate(cfg.psi_specs):
        if spec.get("kind") == "natural":
            if i >= len(grids):
                raise ConfigError("natural psi needs a matching input")
            table = oracle.moments_table(grids[i], [float(p) for p in table_grid])
            psis.append(NaturalPsi(table))
        elif spec.get("kind") == "file":
            from .formats import parse_moments

            with open(spec["path"], encoding="utf-8") as fh:
                psis.append(NaturalPsi(parse_moments(fh.read())))
        else:
            psis.append(make_psi(spec))
    return psis


def _combine(cfg: RunConfig, psis: list[PsiFunction]):
    """Build (kappa, argmin function, envelope function) for the operation."""
    op = cfg.operation
    kind = op.get("kind")
    if kind == "product":
        kappa = calculus.combine_product(psis[0], psis[1])
        return kappa, None, None
    if kind == "tensor":
        return calculus.combine_tensor(psis[0], psis[1]), None, None
    if kind == "convolution":
        n = int(op.get("n_dim", 1))
        return calculus.combine_convolution(psis[0], psis[1], n), None, None
    if kind == "infimal_convolution":
        d = int(op.get("d", 1))
        m = int(op.get("m", 2))
        kappa, relaxed = calculus.combine_infimal_convolution(psis[0], d, m)
        env = lambda p: relaxed * psis[0](p)
        return kappa, None, env
    if kind == "maximal":
        gamma = float(op.get("gamma", 1.0))
        d = int(op.get("d", 2))
        c_env = float(op.get("c_env", 1.0))
        kappa = calculus.combine_maximal(gamma, d, c_env)
        argmin = lambda p: calculus.maximal_split_min(gamma, d, p)[1]
        env = lambda p: c_env ** d * calculus.maximal_envelope(gamma, d, p)
        return kappa, argmin, env
    if kind == "hausdorff":
        gamma = float(op.get("gamma", 1.0))
        m = int(op.get("m", 2))
        c_env = float(op.get("c_env", 1.0))
        kappa = calculus.combine_hausdorff(gamma, m, c_env)
        argmin = lambda p: calculus.hausdorff_split_min(gamma, m, p)[1]
        exponent = calculus.hausdorff_envelope_exponent(gamma, m)
        env = lambda p: c_env * p ** exponent
        return kappa, argmin, env
    if kind == "toeplitz":
        g1 = float(op.get("gamma1", 1.0))
        g2 = float(op.get("gamma2", 1.0))
        return calculus.combine_toeplitz(g1, g2), None, None
    if kind == "bilinear":
        lbar = float(op.get("kernel_lbar", 1.0))

        def kernel_norm(p: float, p1: float, p2: float) -> float:
            return lbar if (p1 == p and p2 == p) else INF

        kappa = calculus.combine_bilinear_integral(psis[0], psis[1], kernel_norm)
        return kappa, None, None
    raise ConfigError(f"unknown operation kind {kind!r}")


def run_bound(cfg: RunConfig) -> tuple[int, str]:
    grids = [corpus.build_input(s, cfg.seed) for s in cfg.inputs]
    psis = _build_psis(cfg, grids)
    kappa, argmin, env = _combine(cfg, psis)
    rows = ["p\tkappa\targmin\tenvelope"]
    for p in _p_values(cfg):
        k = kappa(p)
        amin = ""
        if argmin is not None:
            amin = ",".join(_fmt(q) for q in argmin(p))
        e = _fmt(env(p)) if env is not None else ""
        rows.append(f"{_fmt(p)}\t{_fmt(k)}\t{amin}\t{e}")
    return EXIT_OK, "\n".join(rows) + "\n"


def run_tail(cfg: RunConfig) -> tuple[int, str]:
    grids = [corpus.build_input(s, cfg.seed) for s in cfg.inputs]
    psis = _build_psis(cfg, grids)
    if not psis:
        raise ConfigError("tail command needs at least one psi spec")
    psi = psis[0]
    norm = float(cfg.tail_grid.get("norm", 1.0))
    ymin = float(cfg.tail_grid.get("min", max(norm, 1.0)))
    ymax = float(cfg.tail_grid.get("max", 4.0 * max(norm, 1.0)))
    count = int(cfg.tail_grid.get("count", 16))
    ys = [float(v) for v in np.geomspace(ymin, ymax, count)]
    op = cfg.operation
    g1 = op.get("gamma1")
    g2 = op.get("gamma2")
    header = ["y", "bound", "power_closed_form"]
    two_readings = g1 is not None and g2 is not None
    if two_readings:
        header += ["product_tail_reading", "combined_psi_reading"]
    rows = ["\t".join(header)]
    if two_readings:
        rows.append(
            "# the two rightmost columns read the combined tail with "
            "exponents g1*g2/(g1+g2) and 1/(g1+g2); they differ in general"
        )
    for y in ys:
        cells = [_fmt(y), _fmt(tail_bound(psi, norm, y))]
        if isinstance(psi, PowerPsi) and psi.beta == 1.0 and psi.gamma > 0.0:
            cells.append(_fmt(power_tail_closed_form(psi.gamma, norm, y)))
        else:
            cells.append("")
        if two_readings:
            s1 = float(op.get("s1", 1.0))
            s2 = float(op.get("s2", 1.0))
            gg1, gg2 = float(g1), float(g2)
            prod_exp = gg1 * gg2 / (gg1 + gg2)
            cells.append(_fmt(math.exp(-((y / (s1 * s2)) ** prod_exp))))
            theta = gg1 + gg2
            k_comb = s1 * s2 * calculus.split_constant(gg1, gg2)
            if y >= k_comb:
                cells.append(_fmt(power_tail_closed_form(theta, k_comb, y)))
            else:
                cells.append("")
        rows.append("\t".join(cells))
    return EXIT_OK, "\n".join(rows) + "\n"


def _verify_pipeline(cfg: RunConfig):
    grids = [corpus.build_input(s, cfg.seed) for s in cfg.inputs]
    psis = _build_psis(cfg, grids)
    kind = cfg.operation.get("kind")
    if len(grids) < 2 or len(psis) < 2:
        raise ConfigError("verify needs two inputs and two psi specs")
    pmin, pmax, count = cfg.psi_grid
    table_grid = [float(p) for p in np.geomspace(max(pmin, 1.0), pmax, count)]
    norms = []
    for g, psi in zip(grids, psis):
        table = oracle.moments_table(g, table_grid)
        from .psi import gls_norm

        norms.append(gls_norm(table, psi))
    if kind == "product":
        g = oracle.pointwise_product(grids[0], grids[1])
        kappa = calculus.combine_product(psis[0], psis[1])
        scale = norms[0] * norms[1]
    elif kind == "tensor":
        g = oracle.tensor_product(grids[0], grids[1])
        kappa = calculus.combine_tensor(psis[0], psis[1])
        scale = norms[0] * norms[1]
    elif kind == "convolution":
        g = oracle.periodic_convolution(grids[0], grids[1])
        n = int(cfg.operation.get("n_dim", grids[0].dims))
        kappa = calculus.combine_convolution(psis[0], psis[1], n)
        scale = norms[0] * norms[1]
    elif kind == "infimal_convolution":
        out, window = oracle.infimal_convolution(grids[0], grids[1])
        g = oracle.restrict_to_window(out, window)
        d = grids[0].dims
        kappa, _ = calculus.combine_infimal_convolution(psis[0], d, 2)
        scale = norms[0] + norms[1]
    else:
        raise ConfigError(f"verify does not support operation {kind!r}")
    return g, ScaledPsi(scale, kappa)


def run_verify(cfg: RunConfig) -> tuple[int, str]:
    g, kappa = _verify_pipeline(cfg)
    rows = ["p\tempirical\tkappa\tratio"]
    worst = -INF
    worst_p = math.nan
    for p in _p_values(cfg):
        emp = oracle.lp_norm(g, p)
        k = kappa(p)
        ratio = 0.0 if math.isinf(k) else emp / k
        if ratio > worst:
            worst, worst_p = ratio, p
        rows.append(f"{_fmt(p)}\t{_fmt(emp)}\t{_fmt(k)}\t{_fmt(ratio)}")
    ok = worst <= 1.0 + cfg.tolerance
    rows.append(
        f"# {'PASS' if ok else 'FAIL'} max_ratio {_fmt(worst)} "
        f"at_p {_fmt(worst_p)} tolerance {_fmt(cfg.tolerance)}"
    )
    return (EXIT_OK if ok else EXIT_CERT_FAIL), "\n".join(rows) + "\n"


def run(cfg: RunConfig, out_dir: str) -> int:
    """Execute a validated config and write its report; returns exit status."""
    if cfg.command == "bound":
        status, report = run_bound(cfg)
    elif cfg.command == "tail":
        status, report = run_tail(cfg)
    else:
        status, report = run_verify(cfg)
    os.makedirs(out_dir, exist_ok=True)
    out_path = os.path.join(out_dir, cfg.out_name)
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report)
    if status == EXIT_CERT_FAIL:
        print(f"certificate failure, see {out_path}", file=sys.stderr)
    return status


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="gls", description="Grand-Lebesgue norm-bound calculus runner"
    )
    parser.add_argument("--config", required=True, help="TOML run config")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="corpus seed")
    parser.add_argument("--tolerance", type=float, default=None,
                        help="certificate tolerance override")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args.seed, args.tolerance)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return run(cfg, args.out)
    except ConfigError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATE
    except GLSError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATE


if __name__ == "__main__":
    sys.exit(main())
