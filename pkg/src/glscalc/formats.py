"""Text formats for moment tables, tail curves, grids, and sequences.

All payloads are UTF-8 with a one-line magic header carrying a format
version. Parsers are strict: unsorted exponents, negative moments, or a
bad header are rejected.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import FormatError
from .fenchel import TailCurve
from .oracle import GridFunction, SequenceFunction
from .psi import MomentTable

_MOMENTS_MAGIC = "glsmoments v1"
_TAIL_MAGIC = "glstail v1"
_GRID_MAGIC = "glsgrid v1"
_SEQ_MAGIC = "glsseq v1"


def _lines(text: str, magic: str) -> list[str]:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != magic:
        raise FormatError(f"expected header {magic!r}")
    return lines[1:]


def _pairs(lines: list[str], what: str) -> list[tuple[float, float]]:
    out = []
    for ln in lines:
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError(f"malformed {what} line: {ln!r}")
        try:
            out.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise FormatError(f"non-numeric {what} line: {ln!r}") from exc
    return out


def parse_moments(text: str) -> MomentTable:
    pairs = _pairs(_lines(text, _MOMENTS_MAGIC), "moment")
    if not pairs:
        raise FormatError("moment table has no entries")
    try:
        return MomentTable(tuple(pairs))
    except Exception as exc:
        raise FormatError(str(exc)) from exc


def format_moments(table: MomentTable) -> str:
    body = "\n".join(f"{p:.17g}\t{m:.17g}" for p, m in table.entries)
    return f"{_MOMENTS_MAGIC}\n{body}\n"


def parse_tail(text: str) -> TailCurve:
    pairs = _pairs(_lines(text, _TAIL_MAGIC), "tail")
    if not pairs:
        raise FormatError("tail curve has no points")
    try:
        return TailCurve(tuple(pairs))
    except Exception as exc:
        raise FormatError(str(exc)) from exc


def format_tail(curve: TailCurve) -> str:
    body = "\n".join(f"{y:.17g}\t{t:.17g}" for y, t in curve.points)
    return f"{_TAIL_MAGIC}\n{body}\n"


def parse_grid(text: str) -> GridFunction:
    lines = _lines(text, _GRID_MAGIC)
    if len(lines) < 3:
        raise FormatError("grid payload too short")
    head = lines[0].split()
    if (
        len(head) != 6
        or head[0] != "dims"
        or head[2] != "periodic"
        or head[4] != "measure"
    ):
        raise FormatError(f"malformed grid header line: {lines[0]!r}")
    try:
        dims = int(head[1])
        periodic = bool(int(head[3]))
    except ValueError as exc:
        raise FormatError(f"malformed grid header line: {lines[0]!r}") from exc
    measure = head[5]
    axes = lines[1].split()
    if len(axes) != 3 * dims:
        raise FormatError("grid axis line must hold lo hi n per dimension")
    box = []
    n = []
    try:
        for i in range(dims):
            lo, hi, ni = axes[3 * i : 3 * i + 3]
            box.append((float(lo), float(hi)))
            n.append(int(ni))
    except ValueError as exc:
        raise FormatError("non-numeric grid axis entry") from exc
    try:
        values = np.array([float(tok) for ln in lines[2:] for tok in ln.split()])
    except ValueError as exc:
        raise FormatError("non-numeric grid value") from exc
    expected = int(np.prod(n))
    if values.size != expected:
        raise FormatError(f"expected {expected} grid values, got {values.size}")
    try:
        return GridFunction(tuple(box), tuple(n), values.reshape(tuple(n)),
                            periodic, measure)
    except Exception as exc:
        raise FormatError(str(exc)) from exc


def format_grid(f: GridFunction) -> str:
    head = (
        f"{_GRID_MAGIC}\n"
        f"dims {f.dims} periodic {int(f.periodic)} measure {f.measure}\n"
    )
    axes = " ".join(
        f"{lo:.17g} {hi:.17g} {ni}" for (lo, hi), ni in zip(f.box, f.n)
    )
    body = "\n".join(f"{v:.17g}" for v in f.values.ravel())
    return f"{head}{axes}\n{body}\n"


def parse_sequence(text: str) -> SequenceFunction:
    support = {}
    for ln in _lines(text, _SEQ_MAGIC):
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError(f"malformed sequence line: {ln!r}")
        try:
            if "/" in parts[0]:
                num, den = parts[0].split("/")
                idx = Fraction(int(num), int(den))
            else:
                idx = Fraction(int(parts[0]))
            support[idx] = support.get(idx, 0.0) + float(parts[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"malformed sequence line: {ln!r}") from exc
    try:
        return SequenceFunction(support)
    except Exception as exc:
        raise FormatError(str(exc)) from exc


def format_sequence(s: SequenceFunction) -> str:
    def key(q: Fraction) -> tuple:
        return (q.numerator / q.denominator, q.denominator)

    lines = []
    for q in sorted(s.support, key=key):
        idx = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        lines.append(f"{idx}\t{s.support[q]:.17g}")
    return _SEQ_MAGIC + "\n" + "\n".join(lines) + "\n"
