"""Genus-2 curves y^2 = f(x): models, bad primes, reduction and point counts."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm
from pathlib import Path
from typing import Sequence

import numpy as np
from sympy import factorint

from .modarith import smallest_nonresidue
from .quadfield import BadReductionError, DegreeOnePrime, QuadElem, is_squarefree, reduce


class CurveFileError(ValueError):
    """Syntax or content error in a curve file; carries the line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


# --- polynomials over Q(sqrt d), coefficient lists low -> high -------------

def poly_trim(f: Sequence[QuadElem]) -> list[QuadElem]:
    f = list(f)
    while f and not f[-1]:
        f.pop()
    return f


def poly_mul(f: Sequence[QuadElem], g: Sequence[QuadElem]) -> list[QuadElem]:
    if not f or not g:
        return []
    d = f[0].d
    out = [QuadElem(d, 0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return poly_trim(out)


def poly_derivative(f: Sequence[QuadElem]) -> list[QuadElem]:
    return poly_trim([c * k for k, c in enumerate(f)][1:])


def resultant(f: Sequence[QuadElem], g: Sequence[QuadElem]) -> QuadElem:
    """Resultant via the Sylvester determinant, Gaussian elimination over the field."""
    f, g = poly_trim(f), poly_trim(g)
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        raise ValueError("resultant of the zero polynomial")
    d = f[0].d
    zero = QuadElem(d, 0)
    size = m + n
    if size == 0:
        return QuadElem(d, 1)
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(reversed(f)) + [zero] * (n - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(reversed(g)) + [zero] * (m - 1 - i))
    det = QuadElem(d, 1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col]), None)
        if pivot is None:
            return zero
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        pv = rows[col][col]
        det = det * pv
        inv = pv.inverse()
        for r in range(col + 1, size):
            if rows[r][col]:
                factor = rows[r][col] * inv
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


def poly_discriminant(f: Sequence[QuadElem]) -> QuadElem:
    f = poly_trim(f)
    n = len(f) - 1
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return resultant(f, poly_derivative(f)) * sign / f[-1]


# --- curve models ----------------------------------------------------------

@dataclass(frozen=True)
class CurveModel:
    """y^2 = c0 + c1 x + ... + c6 x^6 over Q(sqrt d); c6 = 0 for quintic models."""

    d: int
    coeffs: tuple[QuadElem, ...]
    integral: bool = False

    def __post_init__(self):
        if not is_squarefree(self.d):
            raise ValueError(f"base field tag {self.d} is not squarefree")
        coeffs = tuple(
            c if isinstance(c, QuadElem) else QuadElem(self.d, c) for c in self.coeffs
        )
        if len(coeffs) > 7:
            raise ValueError("at most seven coefficients")
        coeffs = coeffs + (QuadElem(self.d, 0),) * (7 - len(coeffs))
        if any(c.d not in (self.d, 1) or (c.d != self.d and c.v) for c in coeffs):
            raise ValueError("coefficient outside the base field")
        object.__setattr__(self, "coeffs", tuple(QuadElem(self.d, c.u, c.v) for c in coeffs))
        if self.degree not in (5, 6):
            raise ValueError(f"degree of f must be 5 or 6, got {self.degree}")

    @property
    def degree(self) -> int:
        return len(poly_trim(self.coeffs)) - 1

    @cached_property
    def binary_discriminant(self) -> QuadElem:
        """Discriminant of f as a binary sextic (c5^2 * disc f for quintics).

        A nonzero residue at an odd prime is exactly good reduction of
        the smooth model, including when c6 vanishes there.
        """
        f = poly_trim(self.coeffs)
        disc = poly_discriminant(f)
        if self.degree == 5:
            disc = disc * f[5] * f[5]
        return disc


def integral_model(raw: CurveModel) -> CurveModel:
    """Scale f by t^2, t the lcm of coefficient denominators (Y = t*y)."""
    if not any(raw.coeffs):
        raise ValueError("zero polynomial")
    t = lcm(*(c.denominator() for c in raw.coeffs))
    return CurveModel(raw.d, tuple(c * (t * t) for c in raw.coeffs), integral=True)


def bad_primes(c: CurveModel) -> frozenset[int]:
    """2 together with every prime dividing the norm of the binary discriminant."""
    if not c.integral:
        raise ValueError("bad_primes needs an integral model")
    disc = c.binary_discriminant
    if not disc:
        raise ValueError("singular curve: discriminant is zero")
    nm = disc.norm()
    return frozenset({2} | set(factorint(abs(nm.numerator))) | set(factorint(nm.denominator)))


@dataclass(frozen=True)
class ReducedCurve:
    """A curve reduced at a degree-one prime; coeffs c0..c6 in F_p."""

    p: int
    coeffs: tuple[int, ...]
    lc_degree: int
    prime: DegreeOnePrime | None = field(default=None, compare=False)


def reduce_curve(c: CurveModel, q: DegreeOnePrime) -> ReducedCurve:
    """Reduce c at q; raises BadReductionError when q is a bad prime."""
    if q.p == 2:
        raise BadReductionError("p = 2 is always treated as bad")
    coeffs = tuple(reduce(x, q) for x in c.coeffs)
    if reduce(c.binary_discriminant, q) == 0:
        raise BadReductionError(f"discriminant vanishes at {q}")
    deg = max(k for k in range(7) if coeffs[k])
    # a degree drop of 2 or more would force the discriminant to vanish
    assert deg >= 5
    return ReducedCurve(q.p, coeffs, deg, q)


# --- point counting ----------------------------------------------------------

@lru_cache(maxsize=256)
def _chi_table(p: int) -> np.ndarray:
    """Quadratic character of F_p as an int8 table, chi(0) = 0."""
    table = -np.ones(p, dtype=np.int8)
    table[0] = 0
    xs = np.arange(1, (p + 1) // 2, dtype=np.int64)
    table[(xs * xs) % p] = 1
    return table


def _count_deg1(rc: ReducedCurve) -> int:
    p = rc.p
    x = np.arange(p, dtype=np.int64)
    val = np.zeros(p, dtype=np.int64)
    for c in reversed(rc.coeffs):
        val = (val * x + c) % p
    affine = p + int(_chi_table(p)[val].sum(dtype=np.int64))
    if rc.lc_degree == 5:
        return affine + 1
    return affine + (2 if _chi_table(p)[rc.coeffs[6]] == 1 else 0)


def _count_deg2(rc: ReducedCurve) -> int:
    p = rc.p
    n = smallest_nonresidue(p)
    grid = np.arange(p, dtype=np.int64)
    a = np.repeat(grid, p)
    b = np.tile(grid, p)
    va = np.zeros(p * p, dtype=np.int64)
    vb = np.zeros(p * p, dtype=np.int64)
    for c in reversed(rc.coeffs):
        va, vb = (va * a + (vb * b % p) * n + c) % p, (va * b + vb * a) % p
    # chi(x) over F_{p^2} equals the F_p character of the norm of x
    norm = (va * va - (vb * vb % p) * n) % p
    affine = p * p + int(_chi_table(p)[norm].sum(dtype=np.int64))
    # the leading coefficient lies in F_p^*, hence is a square in F_{p^2}
    return affine + (1 if rc.lc_degree == 5 else 2)


def count_points(rc: ReducedCurve, degree: int = 1) -> int:
    """Number of points of the smooth model over F_q, q = p^degree."""
    if degree == 1:
        return _count_deg1(rc)
    if degree == 2:
        return _count_deg2(rc)
    raise ValueError("degree must be 1 or 2")


# --- curve files -------------------------------------------------------------

_C_LINE = re.compile(r"^c\s+(\d+)\s+(\S+)\s+(\S+)$")


def _parse_fraction(token: str, line: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise CurveFileError(f"bad rational {token!r}", line) from None


def parse_curve(text: str) -> CurveModel:
    """Parse the line-oriented curve format (``d`` line, then ``c k u v`` lines)."""
    d = None
    coeffs: dict[int, tuple[Fraction, Fraction]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("d ") or line == "d":
            if d is not None:
                raise CurveFileError("duplicate d line", lineno)
            parts = line.split()
            if len(parts) != 2:
                raise CurveFileError("expected 'd <squarefree-int>'", lineno)
            try:
                d = int(parts[1])
            except ValueError:
                raise CurveFileError(f"bad integer {parts[1]!r}", lineno) from None
            if not is_squarefree(d):
                raise CurveFileError(f"{d} is not squarefree", lineno)
            continue
        m = _C_LINE.match(line)
        if not m:
            raise CurveFileError(f"unrecognised line {line!r}", lineno)
        if d is None:
            raise CurveFileError("coefficient before the d line", lineno)
        k = int(m.group(1))
        if k > 6:
            raise CurveFileError(f"coefficient index {k} out of range", lineno)
        if k in coeffs:
            raise CurveFileError(f"duplicate coefficient c{k}", lineno)
        u, v = _parse_fraction(m.group(2), lineno), _parse_fraction(m.group(3), lineno)
        if d == 1 and v:
            raise CurveFileError("nonzero sqrt part over Q", lineno)
        coeffs[k] = (u, v)
    if d is None:
        raise CurveFileError("missing d line")
    missing = sorted(set(range(7)) - set(coeffs))
    if missing:
        raise CurveFileError(f"missing coefficients {missing}")
    try:
        return CurveModel(d, tuple(QuadElem(d, *coeffs[k]) for k in range(7)))
    except ValueError as exc:
        raise CurveFileError(str(exc)) from None


def load_curve(path: str | Path) -> CurveModel:
    return parse_curve(Path(path).read_text(encoding="utf-8"))


def format_curve(c: CurveModel, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {ln}" for ln in comment.splitlines())
    lines.append(f"d {c.d}")
    for k, x in enumerate(c.coeffs):
        lines.append(
            f"c {k} {x.u.numerator}/{x.u.denominator} {x.v.numerator}/{x.v.denominator}"
        )
    return "\n".join(lines) + "\n"
