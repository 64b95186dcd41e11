"""Frobenius quartics from point counts and their half-trace factorizations."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .quadfield import DegreeOnePrime, square_factor, squarefree_part


class InconsistentFrobeniusError(ValueError):
    """Point counts that cannot come from a good prime (parity or Weil failure)."""


@dataclass(frozen=True)
class FrobeniusData:
    prime: DegreeOnePrime
    n1: int
    n2: int
    s1: int
    s2: int

    @property
    def p(self) -> int:
        return self.prime.p

    @property
    def quartic(self) -> tuple[int, int, int, int, int]:
        """Coefficients of x^4 - s1 x^3 + s2 x^2 - p s1 x + p^2, highest first."""
        p = self.p
        return (1, -self.s1, self.s2, -p * self.s1, p * p)


def charpoly_from_counts(prime: DegreeOnePrime, n1: int, n2: int) -> FrobeniusData:
    p = prime.p
    s1 = p + 1 - n1
    twice_s2 = s1 * s1 - (p * p + 1 - n2)
    if twice_s2 % 2:
        raise InconsistentFrobeniusError(f"non-integral s2 at {prime} (N1={n1}, N2={n2})")
    s2 = twice_s2 // 2
    if s1 * s1 > 16 * p or abs(s2) > 6 * p:
        raise InconsistentFrobeniusError(f"Weil bound violated at {prime}: s1={s1}, s2={s2}")
    fd = FrobeniusData(prime, n1, n2, s1, s2)
    if not half_trace_factorizations(fd, strict=False):
        raise InconsistentFrobeniusError(f"no Weil-valid factorization at {prime}")
    return fd


@dataclass(frozen=True)
class HalfTraces:
    """The conjugate pair u +- v*sqrt(m) with constant-term sign eps.

    eps = +1 means (x^2 - a x + p)(x^2 - b x + p); eps = -1 means the
    same with -p. m = 1 marks a rational pair.
    """

    u: Fraction
    v: Fraction
    m: int
    eps: int

    @property
    def is_rational(self) -> bool:
        return self.m == 1

    @property
    def field(self) -> int | None:
        return None if self.is_rational else self.m

    def rational_pair(self) -> tuple[Fraction, Fraction]:
        if not self.is_rational:
            raise ValueError("half-traces are not rational")
        return (self.u + self.v, self.u - self.v)

    def __str__(self) -> str:
        return f"{_fmt(self.u)}±{_fmt(self.v)}√{self.m}({self.eps:+d})"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_HT = re.compile(r"^(-?\d+(?:/\d+)?)±(\d+(?:/\d+)?)√(-?\d+)\(([+-]1)\)$")


def parse_half_traces(text: str) -> HalfTraces:
    m = _HT.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse half-traces {text!r}")
    return HalfTraces(Fraction(m.group(1)), Fraction(m.group(2)), int(m.group(3)), int(m.group(4)))


def _pair_within_weil(s1: int, disc: int, p: int) -> bool:
    """Is (|s1| + sqrt(disc)) / 2 <= 2 sqrt(p), decided in integers."""
    a = abs(s1)
    if a * a > 16 * p:
        return False
    rhs = 16 * p + a * a - disc
    return rhs >= 0 and 64 * a * a * p <= rhs * rhs


def _normal_form(u: Fraction, radicand: int, scale: int, eps: int) -> HalfTraces:
    """u +- sqrt(radicand)/scale in normal form."""
    if radicand == 0:
        return HalfTraces(u, Fraction(0), 1, eps)
    m = squarefree_part(radicand)
    f = square_factor(radicand)
    return HalfTraces(u, Fraction(f, scale), m, eps)


def half_trace_factorizations(fd: FrobeniusData, strict: bool = True) -> list[HalfTraces]:
    """Every Weil-valid splitting of the quartic into two quadratics.

    The +p branch comes first. The -p branch exists only when s1 = 0.
    """
    p, s1, s2 = fd.p, fd.s1, fd.s2
    out: list[HalfTraces] = []
    disc = s1 * s1 - 4 * (s2 - 2 * p)
    if disc >= 0 and _pair_within_weil(s1, disc, p):
        out.append(_normal_form(Fraction(s1, 2), disc, 2, +1))
    if s1 == 0:
        k = s2 + 2 * p
        if 0 <= k <= 4 * p:
            out.append(_normal_form(Fraction(0), -k, 1, -1))
    if strict and not out:
        raise InconsistentFrobeniusError(f"no Weil-valid factorization at {fd.prime}")
    return out


def is_square_type(fd: FrobeniusData) -> int | None:
    """a when the quartic equals (x^2 - a x + p)^2 with a an integer, else None."""
    if fd.s1 % 2:
        return None
    a = fd.s1 // 2
    return a if fd.s2 == a * a + 2 * fd.p else None


def expand_factorization(ht: HalfTraces, p: int) -> tuple[Fraction, ...]:
    """Expand (x^2 - a x + eps p)(x^2 - b x + eps p), highest coefficient first.

    a + b = 2u and ab = u^2 - v^2 m are rational, so the product is too.
    """
    tr = 2 * ht.u
    nm = ht.u * ht.u - ht.v * ht.v * ht.m
    c = ht.eps * p
    return (Fraction(1), -tr, nm + 2 * c, -tr * c, Fraction(c * c))

