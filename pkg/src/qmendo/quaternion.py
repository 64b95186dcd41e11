"""Rational quaternion algebras (a, b / Q) described by their Hilbert symbols."""

from __future__ import annotations

import math
from dataclasses import dataclass

from sympy import factorint

from .modarith import legendre
from .quadfield import is_squarefree, split_type, squarefree_part

INF = math.inf


def _split_valuation(x: int, p: int) -> tuple[int, int]:
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k, x


def hilbert_symbol(a: int, b: int, place: int | float) -> int:
    """Local Hilbert symbol (a, b)_v for nonzero integers a, b; place a prime or INF."""
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if place == INF:
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    alpha, u = _split_valuation(a, p)
    beta, v = _split_valuation(b, p)
    if p == 2:
        eps_u, eps_v = ((u - 1) // 2) % 2, ((v - 1) // 2) % 2
        om_u, om_v = ((u * u - 1) // 8) % 2, ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * legendre(u, p) ** beta * legendre(v, p) ** alpha


def _relevant_primes(a: int, b: int) -> list[int]:
    return sorted({2} | set(factorint(abs(a))) | set(factorint(abs(b))))


def ramified_set(a: int, b: int) -> frozenset:
    """Places (primes, and INF) where (a, b / Q) ramifies."""
    places = [p for p in _relevant_primes(a, b) if hilbert_symbol(a, b, p) == -1]
    if hilbert_symbol(a, b, INF) == -1:
        places.append(INF)
    return frozenset(places)


def discriminant(a: int, b: int) -> int:
    return math.prod(p for p in ramified_set(a, b) if p != INF)


@dataclass(frozen=True)
class QuaternionAlgebra:
    a: int
    b: int

    def __post_init__(self):
        if self.a == 0 or self.b == 0:
            raise ValueError("symbol entries must be nonzero")

    @property
    def ramified(self) -> frozenset:
        return ramified_set(self.a, self.b)

    @property
    def discriminant(self) -> int:
        return discriminant(self.a, self.b)

    @property
    def indefinite(self) -> bool:
        return self.a > 0 or self.b > 0

    def is_division(self) -> bool:
        return bool(self.ramified)

    def isomorphic(self, other: QuaternionAlgebra) -> bool:
        return self.ramified == other.ramified


def embeds(m: int, D: int) -> bool:
    """Whether Q(sqrt m) embeds in the algebra of discriminant D (finite places)."""
    if not is_squarefree(D):
        raise ValueError(f"discriminant {D} is not squarefree")
    if D == 1:
        return True
    return all(split_type(q, m) != "split" for q in factorint(D))


def is_hereditary(D: int) -> bool:
    if D < 1:
        raise ValueError("discriminant must be positive")
    return D == 1 or is_squarefree(D)


def check_structure(D: int, delta: int, m: int) -> bool:
    """Does (-D*delta, m / Q) have discriminant D?"""
    if D * delta == 0 or m == 0:
        raise ValueError("degenerate symbol")
    if squarefree_part(m) == 1:
        raise ValueError(f"{m} is a square")
    return discriminant(-D * delta, m) == D


def check_triple(m1: int, m2: int, m3: int, D: int) -> bool:
    """Are Q(sqrt m1), Q(sqrt m2), Q(sqrt m3) the three fields of an anticommuting pair in B_D?"""
    ms = [squarefree_part(m) for m in (m1, m2, m3)]
    if len(set(ms)) < 3:
        raise ValueError("fields must be pairwise distinct modulo squares")
    if squarefree_part(-ms[0] * ms[1]) != ms[2]:
        return False
    if not all(embeds(m, D) for m in ms):
        return False
    return discriminant(ms[0], ms[1]) == D
