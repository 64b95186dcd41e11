"""Arithmetic in F_p and F_{p^2} for odd primes p."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from sympy import factorint, isprime


@lru_cache(maxsize=4096)
def _is_odd_prime(p: int) -> bool:
    return p > 2 and bool(isprime(p))


def require_odd_prime(p: int) -> None:
    if not _is_odd_prime(p):
        raise ValueError(f"{p} is not an odd prime")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) in {-1, 0, 1} via Euler's criterion."""
    require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=4096)
def smallest_nonresidue(p: int) -> int:
    require_odd_prime(p)
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    raise AssertionError("unreachable for odd p")


def sqrt_mod(a: int, p: int) -> tuple[int, int] | None:
    """Square roots of a modulo p as the pair (r, p - r) with r <= p - r.

    Returns None when a is a non-residue. Tonelli-Shanks, with the
    non-residue taken as the smallest one so output is reproducible.
    """
    ls = legendre(a, p)
    if ls == -1:
        return None
    a %= p
    if a == 0:
        return (0, 0)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        r = pow(a, (p + 1) // 4, p)
    else:
        z = smallest_nonresidue(p)
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return (min(r, p - r), max(r, p - r))


@dataclass(frozen=True)
class Fp:
    """Element of the prime field F_p."""

    value: int
    p: int

    def __post_init__(self):
        require_odd_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mismatched characteristics")
            return other.value
        return other % self.p

    def __add__(self, other) -> Fp:
        return Fp(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other) -> Fp:
        return Fp(self.value - self._coerce(other), self.p)

    def __neg__(self) -> Fp:
        return Fp(-self.value, self.p)

    def __mul__(self, other) -> Fp:
        return Fp(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Fp:
        return Fp(pow(self.value, e, self.p), self.p)

    def inverse(self) -> Fp:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return Fp(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other) -> Fp:
        return self * Fp(self._coerce(other), self.p).inverse()

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class Fp2Elem:
    """a + b*t in F_p[t]/(t^2 - n), n a fixed non-residue mod p."""

    a: int
    b: int
    p: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)

    @classmethod
    def make(cls, a: int, b: int, p: int) -> Fp2Elem:
        """Build an element in the canonical model (n = smallest non-residue)."""
        return cls(a, b, p, smallest_nonresidue(p))

    def _same(self, other: Fp2Elem | int) -> Fp2Elem:
        if isinstance(other, Fp2Elem):
            if (other.p, other.n) != (self.p, self.n):
                raise ValueError("mismatched F_p^2 models")
            return other
        return Fp2Elem(other, 0, self.p, self.n)

    def __add__(self, other) -> Fp2Elem:
        o = self._same(other)
        return Fp2Elem(self.a + o.a, self.b + o.b, self.p, self.n)

    __radd__ = __add__

    def __sub__(self, other) -> Fp2Elem:
        o = self._same(other)
        return Fp2Elem(self.a - o.a, self.b - o.b, self.p, self.n)

    def __neg__(self) -> Fp2Elem:
        return Fp2Elem(-self.a, -self.b, self.p, self.n)

    def __mul__(self, other) -> Fp2Elem:
        o = self._same(other)
        p = self.p
        return Fp2Elem(
            (self.a * o.a + self.n * (self.b * o.b % p)) % p,
            (self.a * o.b + self.b * o.a) % p,
            p,
            self.n,
        )

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Fp2Elem:
        if e < 0:
            return self.inverse() ** (-e)
        result = Fp2Elem(1, 0, self.p, self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def norm(self) -> int:
        return (self.a * self.a - self.n * self.b * self.b) % self.p

    def conjugate(self) -> Fp2Elem:
        return Fp2Elem(self.a, -self.b, self.p, self.n)

    def frobenius(self) -> Fp2Elem:
        return self ** self.p

    def inverse(self) -> Fp2Elem:
        nm = self.norm()
        if nm == 0:
            raise ZeroDivisionError("0 has no inverse in F_p^2")
        inv = pow(nm, -1, self.p)
        c = self.conjugate()
        return Fp2Elem(c.a * inv, c.b * inv, self.p, self.n)

    def __truediv__(self, other) -> Fp2Elem:
        return self * self._same(other).inverse()

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_one(self) -> bool:
        return self.a == 1 and self.b == 0

    def in_base_field(self) -> bool:
        return self.b == 0


def fp2_is_square(x: Fp2Elem) -> bool:
    """True iff x is a square in F_{p^2} (zero counts as a square)."""
    if x.is_zero():
        return True
    return (x ** ((x.p * x.p - 1) // 2)).is_one()


def mult_order(x: Fp | Fp2Elem, group_order: int) -> int:
    """Multiplicative order of x, given a multiple of it (the group order)."""
    if x.is_zero():
        raise ValueError("0 has no multiplicative order")
    if not (x ** group_order).is_one():
        raise ValueError("group_order is not a multiple of the element order")
    n = group_order
    for q in factorint(group_order):
        while n % q == 0 and (x ** (n // q)).is_one():
            n //= q
    return n
