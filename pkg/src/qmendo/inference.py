"""Global inference of the endomorphism structure from a trace dataset."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from .frobenius import FrobeniusData, HalfTraces, half_trace_factorizations, is_square_type
from .quadfield import (
    DegreeOnePrime,
    enumerate_quadratic_exts,
    extension_classes,
    same_extension,
    splits_in_ext,
    squarefree_part,
)
from .quaternion import check_triple, embeds

RATIONAL_DELTA_CAVEAT = (
    "only extensions K(sqrt delta) with rational delta were considered"
)


@dataclass(frozen=True)
class TraceEntry:
    frob: FrobeniusData
    candidates: tuple[HalfTraces, ...]

    @property
    def prime(self) -> DegreeOnePrime:
        return self.frob.prime

    @classmethod
    def from_frobenius(cls, fd: FrobeniusData) -> TraceEntry:
        return cls(fd, tuple(half_trace_factorizations(fd)))


@dataclass(frozen=True)
class TraceDataset:
    d: int
    bad: frozenset[int]
    entries: tuple[TraceEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "bad", frozenset(self.bad))
        entries = tuple(sorted(self.entries, key=lambda e: (e.prime.p, e.prime.r)))
        for e in entries:
            if not e.candidates:
                raise ValueError(f"no candidate factorization at {e.prime}")
            if e.prime.p in self.bad:
                raise ValueError(f"{e.prime} lies over a bad prime")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_frobenius(cls, d: int, bad: Iterable[int], frobs: Iterable[FrobeniusData]) -> TraceDataset:
        return cls(d, frozenset(bad), tuple(TraceEntry.from_frobenius(fd) for fd in frobs))


@dataclass(frozen=True)
class BaseEnd:
    """End_K(A) (x) Q as far as the traces decide it.

    kind is "Z" (no quadratic field fits), "candidates" (fields that
    fit every prime) or "unresolved" (every prime admits rational
    half-traces, so nothing is excluded).
    """

    kind: str
    fields: tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.kind == "Z":
            return "Z"
        if self.kind == "unresolved":
            return "unresolved"
        return " or ".join(f"Q(sqrt {m})" for m in self.fields)


def _entry_fields(entry: TraceEntry, D: int | None) -> tuple[frozenset[int], bool]:
    """Quadratic fields offered by an entry, and whether a rational candidate exists."""
    wildcard = any(c.is_rational for c in entry.candidates)
    fields = frozenset(
        c.m for c in entry.candidates
        if not c.is_rational and (D is None or embeds(c.m, D))
    )
    return fields, wildcard


def base_end_algebra(ds: TraceDataset) -> BaseEnd:
    if not ds.entries:
        raise ValueError("empty dataset")
    surviving: frozenset[int] | None = None
    for entry in ds.entries:
        fields, wildcard = _entry_fields(entry, None)
        if wildcard:
            continue
        surviving = fields if surviving is None else surviving & fields
    if surviving is None:
        return BaseEnd("unresolved")
    if not surviving:
        return BaseEnd("Z")
    return BaseEnd("candidates", tuple(sorted(surviving, key=lambda m: (abs(m), m < 0))))


@dataclass(frozen=True)
class DeltaOutcome:
    """How one candidate extension K(sqrt delta) fared against the data."""

    delta: int
    accepted: bool
    fields: tuple[int, ...] | None
    split: tuple[DegreeOnePrime, ...]
    inert: tuple[DegreeOnePrime, ...]
    witness: DegreeOnePrime | None = None
    reason: str = ""


def _judge_delta(ds: TraceDataset, delta: int, D: int) -> DeltaOutcome:
    split, inert = [], []
    surviving: frozenset[int] | None = None
    for entry in ds.entries:
        kind = splits_in_ext(entry.prime, delta)
        if kind == "inert":
            inert.append(entry.prime)
            if entry.frob.s1 != 0:
                return DeltaOutcome(delta, False, None, tuple(split), tuple(inert),
                                    entry.prime, "nonzero trace at an inert prime")
        elif kind == "split":
            split.append(entry.prime)
            fields, wildcard = _entry_fields(entry, D)
            if wildcard:
                continue
            surviving = fields if surviving is None else surviving & fields
            if not surviving:
                return DeltaOutcome(delta, False, None, tuple(split), tuple(inert),
                                    entry.prime, "no common quadratic field at split primes")
    fields = None if surviving is None else tuple(sorted(surviving, key=lambda m: (abs(m), m < 0)))
    return DeltaOutcome(delta, True, fields, tuple(split), tuple(inert))


@dataclass(frozen=True)
class SelectedFactorization:
    prime: DegreeOnePrime
    choice: HalfTraces | None
    ambiguous: bool


@dataclass(frozen=True)
class EndoReport:
    end_K: BaseEnd
    gal_LK: str
    assignments: tuple[tuple[int, int], ...]
    flags: tuple[str, ...]
    eliminated: tuple[tuple[int, DegreeOnePrime, str], ...]
    outcomes: tuple[DeltaOutcome, ...] = ()
    selected: tuple[SelectedFactorization, ...] = field(default=())
    assumed_D: int = 1
    d: int = 1


def _solve_triple(accepted: list[DeltaOutcome], D: int) -> list[tuple[int, int, int]]:
    """All field assignments to three accepted extensions passing the quaternion check."""
    pools = []
    for out in accepted:
        pools.append([None] if out.fields is None else list(out.fields))
    solutions = set()
    for combo in product(*pools):
        known = [m for m in combo if m is not None]
        ms = list(combo)
        if len(known) < 2:
            continue
        if len(known) == 2:
            i = ms.index(None)
            ms[i] = squarefree_part(-known[0] * known[1])
        try:
            if check_triple(ms[0], ms[1], ms[2], D):
                solutions.add(tuple(ms))
        except ValueError:
            continue
    return sorted(solutions)


def select_factorizations(ds: TraceDataset, assignments: Iterable[tuple[int, int]]
                          ) -> tuple[SelectedFactorization, ...]:
    """Pick, prime by prime, the factorization consistent with the assignments.

    Exact field matches beat rational candidates; among rational ones the
    sign expected from the split extensions wins (eps = -1 only when every
    extension in which the prime splits carries an imaginary field).
    """
    assignments = list(assignments)
    out = []
    for entry in ds.entries:
        fields = [m for delta, m in assignments if splits_in_ext(entry.prime, delta) == "split"]
        expected_eps = -1 if fields and all(m < 0 for m in fields) else +1
        ranked = []
        for c in entry.candidates:
            if c.field is not None and c.field in fields:
                rank = 0
            elif c.is_rational:
                rank = 1 if c.eps == expected_eps else 2
            else:
                continue
            ranked.append((rank, c))
        if not ranked:
            out.append(SelectedFactorization(entry.prime, None, False))
            continue
        ranked.sort(key=lambda rc: rc[0])
        best = ranked[0][0]
        ties = [c for r, c in ranked if r == best]
        out.append(SelectedFactorization(entry.prime, ties[0], len(set(ties)) > 1))
    return tuple(out)


def infer_endo_structure(ds: TraceDataset, assumed_D: int, min_split: int = 3,
                         min_inert: int = 3) -> EndoReport:
    """Decide Gal(L/K) and the intermediate algebras, assuming QM by B_D."""
    base = base_end_algebra(ds)
    flags = [
        f"consistent with QM by the quaternion algebra of discriminant {assumed_D} "
        "(assumed, not proved)",
        RATIONAL_DELTA_CAVEAT,
    ]
    if base.kind == "candidates":
        flags.append("End_K is not Z on this data; extension analysis skipped")
        return EndoReport(base, "inconclusive", (), tuple(flags), (), assumed_D=assumed_D, d=ds.d)

    deltas = extension_classes(ds.d, enumerate_quadratic_exts(ds.d, ds.bad))
    outcomes = [_judge_delta(ds, delta, assumed_D) for delta in deltas]
    accepted = [o for o in outcomes if o.accepted]
    eliminated = tuple((o.delta, o.witness, o.reason) for o in outcomes if not o.accepted)

    for o in accepted:
        if len(o.split) < min_split or len(o.inert) < min_inert:
            flags.append(
                f"low confidence for delta={o.delta}: {len(o.split)} split, "
                f"{len(o.inert)} inert primes"
            )

    assignments: tuple[tuple[int, int], ...] = ()
    if len(accepted) == 3:
        d1, d2, d3 = (o.delta for o in accepted)
        if not same_extension(ds.d, d1 * d2, d3):
            flags.append("accepted extensions are not the subfields of one biquadratic extension")
            gal = "inconclusive"
        else:
            solutions = _solve_triple(accepted, assumed_D)
            if len(solutions) == 1:
                gal = "C2xC2"
                assignments = tuple(zip((o.delta for o in accepted), solutions[0]))
                flags.append(f"quaternion triple check passed for D={assumed_D}")
            else:
                gal = "inconclusive"
                flags.append(
                    f"{len(solutions)} field assignments pass the quaternion triple check"
                )
    elif len(accepted) == 1:
        gal = "C2"
        o = accepted[0]
        if o.fields is not None and len(o.fields) == 1:
            assignments = ((o.delta, o.fields[0]),)
        else:
            flags.append(f"field over K(sqrt {o.delta}) not determined: {o.fields}")
    elif not accepted and all(is_square_type(e.frob) is not None for e in ds.entries):
        gal = "trivial"
    else:
        gal = "inconclusive"
        flags.append(f"{len(accepted)} extensions survive")

    selected = select_factorizations(ds, assignments) if assignments else ()
    return EndoReport(base, gal, assignments, tuple(flags), eliminated,
                      tuple(outcomes), selected, assumed_D, ds.d)


class NotSquareTypeError(ValueError):
    def __init__(self, prime: DegreeOnePrime):
        self.prime = prime
        super().__init__(f"Frobenius at {prime} is not of the form (x^2 - a x + p)^2")


@dataclass(frozen=True)
class LKVerdict:
    confirmed: bool
    survivors: tuple[int, ...]
    witnesses: tuple[tuple[int, DegreeOnePrime, int], ...]


def verify_L_equals_K(ds: TraceDataset) -> LKVerdict:
    """Rule out every quadratic L/K by an inert prime with a_p != 0."""
    a_values = []
    for entry in ds.entries:
        a = is_square_type(entry.frob)
        if a is None:
            raise NotSquareTypeError(entry.prime)
        a_values.append((entry.prime, a))
    survivors, witnesses = [], []
    for delta in extension_classes(ds.d, enumerate_quadratic_exts(ds.d, ds.bad)):
        hit = next(
            ((q, a) for q, a in a_values if a != 0 and splits_in_ext(q, delta) == "inert"),
            None,
        )
        if hit is None:
            survivors.append(delta)
        else:
            witnesses.append((delta, hit[0], hit[1]))
    return LKVerdict(not survivors, tuple(survivors), tuple(witnesses))
