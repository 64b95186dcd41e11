"""Per-prime Frobenius computation fanned out over a worker pool."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .curve import CurveModel, bad_primes, count_points, integral_model, reduce_curve
from .frobenius import FrobeniusData, charpoly_from_counts, half_trace_factorizations
from .inference import TraceDataset, TraceEntry
from .quadfield import BadReductionError, DegreeOnePrime, degree_one_primes


@dataclass(frozen=True)
class FrobRow:
    prime: DegreeOnePrime
    n1: int
    n2: int | None
    frob: FrobeniusData | None
    candidates: tuple = ()


def _count_one(args) -> tuple[DegreeOnePrime, int | None, int | None, str | None]:
    curve, q, deg1_only = args
    try:
        rc = reduce_curve(curve, q)
    except BadReductionError as exc:
        return q, None, None, str(exc)
    n1 = count_points(rc, 1)
    n2 = None if deg1_only else count_points(rc, 2)
    return q, n1, n2, None


def select_primes(curve: CurveModel, p_min: int, p_max: int, embedding: str = "both",
                  excluded: Iterable[int] = ()) -> list[DegreeOnePrime]:
    """Degree-one primes in range, minus bad ones; embedding is '+', '-' or 'both'."""
    skip = set(bad_primes(curve)) | set(excluded)
    primes = degree_one_primes(curve.d, p_max, skip, p_min=max(p_min, 3))
    if embedding == "both" or curve.d == 1:
        return primes
    if embedding not in "+-":
        raise ValueError("embedding must be '+', '-' or 'both'")
    # '+' is the smaller square root r <= p - r
    keep = {}
    for q in primes:
        cur = keep.get(q.p)
        if cur is None or (q.r < cur.r) == (embedding == "+"):
            keep[q.p] = q
    return sorted(keep.values())


def compute_counts(curve: CurveModel, primes: Sequence[DegreeOnePrime], deg1_only: bool = False,
                   workers: int = 1) -> tuple[list[tuple[DegreeOnePrime, int, int | None]], list[str]]:
    """Point counts per prime, in input order, plus notes for skipped primes."""
    if not curve.integral:
        curve = integral_model(curve)
    jobs = [(curve, q, deg1_only) for q in primes]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_count_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_count_one(j) for j in jobs]
    counts, notes = [], []
    for q, n1, n2, err in results:
        if err is not None:
            notes.append(f"skipped {q}: {err}")
        else:
            counts.append((q, n1, n2))
    return counts, notes


def frobenius_rows(curve: CurveModel, primes: Sequence[DegreeOnePrime], deg1_only: bool = False,
                   workers: int = 1) -> tuple[list[FrobRow], list[str]]:
    counts, notes = compute_counts(curve, primes, deg1_only, workers)
    rows = []
    for q, n1, n2 in counts:
        if n2 is None:
            rows.append(FrobRow(q, n1, None, None))
            continue
        fd = charpoly_from_counts(q, n1, n2)
        rows.append(FrobRow(q, n1, n2, fd, tuple(half_trace_factorizations(fd))))
    return rows, notes


def build_dataset(curve: CurveModel, p_max: int, p_min: int = 3, embedding: str = "both",
                  bad: Iterable[int] | None = None, workers: int = 1) -> tuple[TraceDataset, list[str]]:
    curve = curve if curve.integral else integral_model(curve)
    S = frozenset(bad) if bad is not None else bad_primes(curve)
    primes = select_primes(curve, p_min, p_max, embedding, excluded=S)
    rows, notes = frobenius_rows(curve, primes, workers=workers)
    entries = tuple(TraceEntry(r.frob, r.candidates) for r in rows)
    return TraceDataset(curve.d, S, entries), notes


FROB_HEADER = ["p", "r", "N1", "N2", "s1", "s2", "candidates"]


def frob_csv(rows: Iterable[FrobRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FROB_HEADER)
    for row in rows:
        if row.frob is None:
            s1 = row.prime.p + 1 - row.n1
            w.writerow([row.prime.p, row.prime.r, row.n1, "", s1, "", ""])
        else:
            fd = row.frob
            w.writerow([fd.p, fd.prime.r, fd.n1, fd.n2, fd.s1, fd.s2,
                        ";".join(str(c) for c in row.candidates)])
    return buf.getvalue()
