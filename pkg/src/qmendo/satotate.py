"""Normalized Frobenius trace statistics, with the degree-one fast path."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .curve import CurveModel, integral_model
from .pipeline import compute_counts, select_primes
from .quadfield import DegreeOnePrime

FAST_PATH_NOTE = (
    "a_p taken from N1 alone, valid under L = K (quartic (x^2 - a x + p)^2); "
    "check with `qmendo verify-lk` or `qmendo infer`"
)


class FastPathError(ValueError):
    def __init__(self, prime: DegreeOnePrime, s1: int):
        self.prime = prime
        super().__init__(f"odd trace s1={s1} at {prime}: not of square type")


@dataclass(frozen=True)
class TracePoint:
    prime: DegreeOnePrime
    n1: int
    a: int

    @property
    def x(self) -> float:
        return self.a / (2 * math.sqrt(self.prime.p))


@dataclass(frozen=True)
class SatoTateSummary:
    xs: tuple[float, ...]
    edges: tuple[float, ...]
    counts: tuple[int, ...]
    moments: tuple[float, ...]
    expected: tuple[float, ...] | None = None

    @property
    def size(self) -> int:
        return len(self.xs)


def fast_path_traces(curve: CurveModel, p_max: int, p_min: int = 3, embedding: str = "both",
                     allow_mixed: bool = False, workers: int = 1
                     ) -> tuple[list[TracePoint], list[str]]:
    """a_p = (p + 1 - N1)/2 at each good degree-one prime."""
    curve = curve if curve.integral else integral_model(curve)
    primes = select_primes(curve, p_min, p_max, embedding)
    counts, notes = compute_counts(curve, primes, deg1_only=True, workers=workers)
    points = []
    for q, n1, _ in counts:
        s1 = q.p + 1 - n1
        if s1 % 2:
            if not allow_mixed:
                raise FastPathError(q, s1)
            notes.append(f"skipped {q}: odd trace s1={s1}")
            continue
        points.append(TracePoint(q, n1, s1 // 2))
    return points, notes


def load_reference_density(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Two columns (x, density), comma or whitespace separated; '#' comments."""
    xs, ys = [], []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        try:
            x, y = float(parts[0]), float(parts[1])
        except (ValueError, IndexError):
            continue  # header row
        xs.append(x)
        ys.append(y)
    if len(xs) < 2:
        raise ValueError("reference density needs at least two points")
    order = np.argsort(xs)
    return np.asarray(xs)[order], np.asarray(ys)[order]


def summarize(xs: Sequence[float], bins: int,
              reference: tuple[np.ndarray, np.ndarray] | None = None) -> SatoTateSummary:
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if len(xs) == 0:
        raise ValueError("empty sample")
    arr = np.asarray(xs, dtype=np.float64)
    if np.any(np.abs(arr) > 1 + 1e-12):
        raise ValueError("normalized trace outside [-1, 1]")
    counts, edges = np.histogram(np.clip(arr, -1, 1), bins=bins, range=(-1.0, 1.0))
    moments = tuple(float(np.mean(arr ** k)) for k in range(1, 9))
    expected = None
    if reference is not None:
        rx, ry = reference
        expected = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            grid = np.linspace(lo, hi, 65)
            mass = np.trapezoid(np.interp(grid, rx, ry, left=0.0, right=0.0), grid)
            expected.append(float(mass * len(arr)))
        expected = tuple(expected)
    return SatoTateSummary(tuple(float(x) for x in arr), tuple(float(e) for e in edges),
                           tuple(int(c) for c in counts), moments, expected)


def histogram_csv(summary: SatoTateSummary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["bin_lo", "bin_hi", "count"]
    if summary.expected is not None:
        header.append("expected")
    w.writerow(header)
    for i, c in enumerate(summary.counts):
        row = [f"{summary.edges[i]:.6f}", f"{summary.edges[i + 1]:.6f}", c]
        if summary.expected is not None:
            row.append(f"{summary.expected[i]:.6f}")
        w.writerow(row)
    return buf.getvalue()


def traces_csv(points: Sequence[TracePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "r", "N1", "a", "x"])
    for pt in points:
        w.writerow([pt.prime.p, pt.prime.r, pt.n1, pt.a, f"{pt.x:.12f}"])
    return buf.getvalue()
