"""Maximality of residual mod-ell images through Dickson's list of maximal subgroups."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm

from .frobenius import HalfTraces
from .modarith import Fp, Fp2Elem, legendre, mult_order, require_odd_prime, sqrt_mod

BOREL = "borel"
SPLIT_CARTAN = "split_cartan_normalizer"
NONSPLIT_CARTAN = "nonsplit_cartan_normalizer"
EXCEPTIONAL = "exceptional"
DETERMINANT = "determinant"
CLASSES = (BOREL, SPLIT_CARTAN, NONSPLIT_CARTAN, EXCEPTIONAL, DETERMINANT)

LADIC_NOTE = (
    "only the mod-ell image is certified; for ell >= 5 the ell-adic image "
    "is then maximal by Serre's lifting lemma"
)


def _require_ell(ell: int) -> None:
    require_odd_prime(ell)
    if ell < 5:
        raise ValueError("ell must be a prime >= 5")


@dataclass(frozen=True)
class ResidualElement:
    """A Frobenius image in GL2(F_ell), known through its trace and determinant."""

    ell: int
    t: int
    n: int
    label: str = field(default="", compare=False)

    def __post_init__(self):
        _require_ell(self.ell)
        object.__setattr__(self, "t", self.t % self.ell)
        object.__setattr__(self, "n", self.n % self.ell)
        if self.n == 0:
            raise ValueError("determinant must be a unit")

    @property
    def disc(self) -> int:
        return (self.t * self.t - 4 * self.n) % self.ell

    @property
    def kind(self) -> str:
        if self.disc == 0:
            return "scalar"
        return "split" if legendre(self.disc, self.ell) == 1 else "nonsplit"

    @cached_property
    def eigenvalues(self) -> tuple:
        """(alpha, beta): ints for split/scalar, conjugate Fp2Elem pair otherwise."""
        ell, half = self.ell, pow(2, -1, self.ell)
        if self.kind == "nonsplit":
            root = Fp2Elem.make(0, 1, ell)  # t^2 = smallest non-residue
            k = sqrt_mod(self.disc * pow(root.n, -1, ell), ell)[0]
            alpha = Fp2Elem.make(self.t * half, k * half, ell)
            return (alpha, alpha.conjugate())
        r = sqrt_mod(self.disc, ell)[0]
        return ((self.t + r) * half % ell, (self.t - r) * half % ell)

    @cached_property
    def eigenvalue_orders(self) -> tuple[int, int]:
        if self.kind == "nonsplit":
            return tuple(mult_order(e, self.ell ** 2 - 1) for e in self.eigenvalues)
        return tuple(mult_order(Fp(e, self.ell), self.ell - 1) for e in self.eigenvalues)

    @cached_property
    def projective_order(self) -> int:
        """Order of alpha/beta; taken as 1 for a repeated eigenvalue."""
        a, b = self.eigenvalues
        if self.kind == "scalar":
            return 1
        if self.kind == "split":
            return mult_order(Fp(a, self.ell) / Fp(b, self.ell), self.ell - 1)
        return mult_order(a / b, self.ell + 1)


def classify(e: ResidualElement) -> tuple:
    """('split', alpha, beta), ('nonsplit',) or ('scalar',)."""
    if e.kind == "split":
        return ("split", *e.eigenvalues)
    return (e.kind,)


class ResidualReductionError(ValueError):
    pass


def reduce_halftrace_mod(ht: HalfTraces, p: int, ell: int, root_choice: str = "+",
                         label: str = "") -> ResidualElement:
    """Trace u + v*w and determinant eps*p modulo ell, with w a square root of m."""
    _require_ell(ell)
    if p % ell == 0:
        raise ResidualReductionError(f"ell = {ell} divides p = {p}")
    if root_choice not in ("+", "-"):
        raise ValueError("root_choice must be '+' or '-'")
    w = 0
    if ht.v != 0:
        roots = sqrt_mod(ht.m, ell) if legendre(ht.m, ell) == 1 else None
        if roots is None:
            raise ResidualReductionError(
                f"ell = {ell} does not split in Q(sqrt {ht.m}); choose another ell"
            )
        w = roots[0] if root_choice == "+" else roots[1]

    def red(x: Fraction) -> int:
        if x.denominator % ell == 0:
            raise ResidualReductionError(f"{x} has ell in the denominator")
        return x.numerator * pow(x.denominator, -1, ell) % ell

    t = (red(ht.u) + red(ht.v) * w) % ell
    return ResidualElement(ell, t, ht.eps * p, label=label)


@dataclass(frozen=True)
class MaximalityVerdict:
    ell: int
    maximal: bool
    remaining: tuple[str, ...]
    witnesses: dict = field(compare=False)
    order_witness: ResidualElement | None = None
    nonsplit_witness: ResidualElement | None = None
    determinants: tuple[int, ...] = ()


def dickson_eliminate(elems: list[ResidualElement], ell: int) -> MaximalityVerdict:
    """Decide whether the elements force the image to be all of GL2(F_ell).

    Each class of maximal subgroups is ruled out by one kind of element:
    Borel by an irreducible char poly; the split Cartan normaliser by an
    irreducible one with nonzero trace; the non-split Cartan normaliser by
    a split one with distinct eigenvalues and nonzero trace; the
    exceptional A4/S4/A5 images by projective order above 5. The
    determinants must also generate F_ell^*.
    """
    _require_ell(ell)
    if not elems:
        raise ValueError("no elements given")
    if any(e.ell != ell for e in elems):
        raise ValueError("elements live modulo a different ell")
    tests = {
        BOREL: lambda e: e.kind == "nonsplit",
        SPLIT_CARTAN: lambda e: e.kind == "nonsplit" and e.t != 0,
        NONSPLIT_CARTAN: lambda e: e.kind == "split" and e.t != 0,
        EXCEPTIONAL: lambda e: e.projective_order > 5,
    }
    witnesses = {}
    for name, test in tests.items():
        hit = next((e for e in elems if test(e)), None)
        if hit is not None:
            witnesses[name] = hit
    dets = sorted({e.n for e in elems})
    det_order = lcm(*(mult_order(Fp(n, ell), ell - 1) for n in dets))
    if det_order == ell - 1:
        witnesses[DETERMINANT] = tuple(dets)
    remaining = tuple(c for c in CLASSES if c not in witnesses)
    order_witness = next(
        (e for e in elems if e.kind == "split" and ell - 1 in e.eigenvalue_orders), None
    )
    nonsplit = [e for e in elems if e.kind == "nonsplit"]
    nonsplit_witness = next(
        (e for e in nonsplit if e.eigenvalue_orders[0] > ell + 1),
        nonsplit[0] if nonsplit else None,
    )
    return MaximalityVerdict(ell, not remaining, remaining, witnesses,
                             order_witness, nonsplit_witness, tuple(dets))
