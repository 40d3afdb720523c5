# -*- coding: utf-8 -*-
"""
Boundary lattice Z^2 with its symplectic pairing.

BoundaryVector is the class of a boundary cycle in a fixed basis, Charge
pairs it with an energy (the Novikov exponent standing in for |Z|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from src.wallcross.errors import FlavorDirectionError, NonPrimitiveError, WallCrossError


@dataclass(frozen=True, order=True)
class BoundaryVector:
    a: int
    b: int

    def __add__(self, other: "BoundaryVector") -> "BoundaryVector":
        return BoundaryVector(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "BoundaryVector") -> "BoundaryVector":
        return BoundaryVector(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "BoundaryVector":
        return BoundaryVector(-self.a, -self.b)

    def scale(self, k: int) -> "BoundaryVector":
        return BoundaryVector(k * self.a, k * self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def as_tuple(self) -> Tuple[int, int]:
        return (self.a, self.b)

    def __str__(self) -> str:
        return f"({self.a},{self.b})"

    @classmethod
    def parse(cls, text: str) -> "BoundaryVector":
        """Parse "a,b" (parentheses optional)."""
        parts = text.strip().strip("()").split(",")
        if len(parts) != 2:
            raise ValueError(f"expected 'a,b', got {text!r}")
        return cls(int(parts[0]), int(parts[1]))


ZERO = BoundaryVector(0, 0)
X_VEC = BoundaryVector(1, 0)
Y_VEC = BoundaryVector(0, 1)


@dataclass(frozen=True)
class Charge:
    boundary: BoundaryVector
    energy: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "energy", Fraction(self.energy))
        if self.energy < 0:
            raise WallCrossError(f"charge energy must be >= 0, got {self.energy}")

    def __add__(self, other: "Charge") -> "Charge":
        # energies at one point add
        return Charge(self.boundary + other.boundary, self.energy + other.energy)

    def __str__(self) -> str:
        return f"{self.boundary}@{self.energy}"


def sympl_pairing(v: BoundaryVector, w: BoundaryVector) -> int:
    return v.a * w.b - v.b * w.a


def is_primitive(v: BoundaryVector) -> bool:
    return math.gcd(abs(v.a), abs(v.b)) == 1


def primitive_decompose(v: BoundaryVector) -> Tuple[int, BoundaryVector]:
    if v.is_zero():
        raise FlavorDirectionError("flavor direction has no primitive decomposition")
    l = math.gcd(abs(v.a), abs(v.b))
    return l, BoundaryVector(v.a // l, v.b // l)


def require_primitive(v: BoundaryVector, what: str = "vector") -> None:
    if not is_primitive(v):
        raise NonPrimitiveError(f"{what} {v} is not primitive")


# --- quadratic refinements ---

def quadratic_refinement(v: BoundaryVector) -> int:
    """Default refinement sigma(a,b) = (-1)^(ab)."""
    return -1 if (v.a * v.b) % 2 else 1


def trivial_refinement(v: BoundaryVector) -> int:
    # Not a refinement for odd pairings; kept for sign experiments.
    return 1


REFINEMENTS: Dict[str, Callable[[BoundaryVector], int]] = {
    "default": quadratic_refinement,
    "trivial": trivial_refinement,
}


def get_refinement(name: str) -> Callable[[BoundaryVector], int]:
    if name not in REFINEMENTS:
        raise WallCrossError(f"unknown sigma choice {name!r}, expected one of {sorted(REFINEMENTS)}")
    return REFINEMENTS[name]


def check_refinement(sigma: Callable[[BoundaryVector], int], bound: int = 4) -> List[Tuple[BoundaryVector, BoundaryVector]]:
    """
    Pairs (v, w) with entries in [-bound, bound] violating
    sigma(v) sigma(w) = (-1)^<v,w> sigma(v+w).
    """
    rng = range(-bound, bound + 1)
    vecs = [BoundaryVector(a, b) for a in rng for b in rng]
    bad = []
    for v in vecs:
        for w in vecs:
            sign = -1 if sympl_pairing(v, w) % 2 else 1
            if sigma(v) * sigma(w) != sign * sigma(v + w):
                bad.append((v, w))
    return bad


def picard_lefschetz(v: BoundaryVector, m: BoundaryVector, inverse: bool = False) -> BoundaryVector:
    """Transvection v -> v + <v,m> m around the invariant direction m."""
    require_primitive(m, "monodromy-invariant direction")
    k = sympl_pairing(v, m)
    if inverse:
        k = -k
    return v + m.scale(k)
