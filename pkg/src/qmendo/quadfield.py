"""Elements of Q(sqrt d), splitting of primes, reduction at degree-one primes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Iterable

from sympy import factorint, primerange

from .modarith import legendre, sqrt_mod


class BadReductionError(ValueError):
    """Raised when an element or curve cannot be reduced at a prime."""


def squarefree_part(n: int) -> int:
    """Signed squarefree part of a nonzero integer (or rational numerator*denominator)."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    sign = -1 if n < 0 else 1
    return sign * prod(q for q, e in factorint(abs(n)).items() if e % 2)


def square_factor(n: int) -> int:
    """Largest f with f^2 | n."""
    if n == 0:
        return 0
    return prod(q ** (e // 2) for q, e in factorint(abs(n)).items())


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorint(abs(n)).values())


def _require_squarefree(d: int) -> None:
    if not is_squarefree(d):
        raise ValueError(f"{d} is not squarefree")


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class QuadElem:
    """u + v*sqrt(d) with exact rational u, v. d = 1 means plain Q."""

    d: int
    u: Fraction
    v: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "u", _frac(self.u))
        object.__setattr__(self, "v", _frac(self.v))
        if self.d == 1 and self.v:
            object.__setattr__(self, "u", self.u + self.v)
            object.__setattr__(self, "v", Fraction(0))

    def _same(self, other) -> QuadElem:
        if isinstance(other, QuadElem):
            if other.d != self.d:
                if other.v == 0:
                    return QuadElem(self.d, other.u)
                raise ValueError(f"mixed base fields Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        return QuadElem(self.d, _frac(other))

    def __add__(self, other) -> QuadElem:
        o = self._same(other)
        return QuadElem(self.d, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __sub__(self, other) -> QuadElem:
        o = self._same(other)
        return QuadElem(self.d, self.u - o.u, self.v - o.v)

    def __rsub__(self, other) -> QuadElem:
        return self._same(other) - self

    def __neg__(self) -> QuadElem:
        return QuadElem(self.d, -self.u, -self.v)

    def __mul__(self, other) -> QuadElem:
        o = self._same(other)
        return QuadElem(
            self.d,
            self.u * o.u + self.d * self.v * o.v,
            self.u * o.v + self.v * o.u,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadElem:
        return QuadElem(self.d, self.u, -self.v)

    def norm(self) -> Fraction:
        return self.u * self.u - self.d * self.v * self.v

    def trace(self) -> Fraction:
        return 2 * self.u

    def inverse(self) -> QuadElem:
        nm = self.norm()
        if nm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        return QuadElem(self.d, self.u / nm, -self.v / nm)

    def __truediv__(self, other) -> QuadElem:
        return self * self._same(other).inverse()

    def __rtruediv__(self, other) -> QuadElem:
        return self._same(other) * self.inverse()

    def __bool__(self) -> bool:
        return bool(self.u) or bool(self.v)

    def denominator(self) -> int:
        """lcm of the denominators of u and v."""
        a, b = self.u.denominator, self.v.denominator
        return a * b // _gcd(a, b)

    def __str__(self) -> str:
        if self.v == 0:
            return str(self.u)
        if self.u == 0:
            return f"{self.v}*sqrt({self.d})"
        sign = "+" if self.v > 0 else "-"
        return f"{self.u} {sign} {abs(self.v)}*sqrt({self.d})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass(frozen=True, order=True)
class DegreeOnePrime:
    """A prime of Q(sqrt d) with residue field F_p, fixed by sqrt(d) -> r mod p."""

    p: int
    r: int

    def __str__(self) -> str:
        return f"({self.p},{self.r})"


def split_type(p: int, d: int) -> str:
    """Decomposition of the rational prime p in Q(sqrt d): split, inert or ramified."""
    _require_squarefree(d)
    if p == 2:
        if d % 4 != 1:
            return "ramified"
        return "split" if d % 8 == 1 else "inert"
    ls = legendre(d, p)
    if ls == 0:
        return "ramified"
    return "split" if ls == 1 else "inert"


def degree_one_primes(d: int, p_max: int, excluded: Iterable[int] = (),
                      p_min: int = 2) -> list[DegreeOnePrime]:
    """All degree-one primes of Q(sqrt d) over p in [p_min, p_max], both embeddings."""
    _require_squarefree(d)
    excluded = set(excluded)
    out: list[DegreeOnePrime] = []
    for p in primerange(max(p_min, 2), p_max + 1):
        if p in excluded:
            continue
        if d == 1:
            out.append(DegreeOnePrime(p, 0))
            continue
        if p == 2 or d % p == 0 or split_type(p, d) != "split":
            continue
        r, s = sqrt_mod(d, p)
        out.extend([DegreeOnePrime(p, r), DegreeOnePrime(p, s)])
    return out


def conjugate_prime(q: DegreeOnePrime) -> DegreeOnePrime:
    return DegreeOnePrime(q.p, (-q.r) % q.p)


def _reduce_rational(x: Fraction, p: int) -> int:
    if x.denominator % p == 0:
        raise BadReductionError(f"denominator of {x} is divisible by {p}")
    return x.numerator * pow(x.denominator, -1, p) % p


def reduce(x: QuadElem, q: DegreeOnePrime) -> int:
    """Image of x in the residue field F_p of q."""
    return (_reduce_rational(x.u, q.p) + _reduce_rational(x.v, q.p) * q.r) % q.p


def enumerate_quadratic_exts(d: int, S: Iterable[int]) -> list[int]:
    """Rational delta giving quadratic extensions of Q(sqrt d) unramified outside S.

    Every squarefree delta built from primes in S, with both signs,
    except 1 and d itself. When 2 is not in S only delta = 1 mod 4 is
    kept, since anything else ramifies at 2. Ordered by |delta|,
    positive before negative.
    """
    primes = sorted(set(S))
    out = set()
    for k in range(len(primes) + 1):
        for combo in combinations(primes, k):
            base = prod(combo)
            out.update((base, -base))
    if 2 not in primes:
        out = {x for x in out if x % 4 == 1}
    out.discard(1)
    out.discard(d)
    return sorted(out, key=lambda x: (abs(x), x < 0))


def same_extension(d: int, delta1: int, delta2: int) -> bool:
    """Whether K(sqrt delta1) = K(sqrt delta2) for K = Q(sqrt d)."""
    q = squarefree_part(delta1 * delta2)
    return q == 1 or q == d


def extension_classes(d: int, deltas: Iterable[int]) -> list[int]:
    """One representative per distinct extension, keeping first occurrence."""
    reps: list[int] = []
    for delta in deltas:
        if not any(same_extension(d, delta, r) for r in reps):
            reps.append(delta)
    return reps


def splits_in_ext(q: DegreeOnePrime, delta: int) -> str:
    """Decomposition of a degree-one prime q in the extension by sqrt(delta)."""
    p = q.p
    if p == 2:
        if delta % 2 == 0 or delta % 4 != 1:
            return "ramified"
        return "split" if delta % 8 == 1 else "inert"
    ls = legendre(delta, p)
    if ls == 0:
        return "ramified"
    return "split" if ls == 1 else "inert"
