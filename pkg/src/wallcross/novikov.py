# -*- coding: utf-8 -*-
"""
Truncated series over Q in lattice monomials z^v with Novikov exponents T^a.

Two filtrations:
  energy  - terms with texp >= lambda are dropped
  degree  - texp counts the number of initial-wall factors, terms with texp > k are dropped

Series are immutable; terms are kept in canonical order (texp, zvec) so that
equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from src.wallcross.errors import CutoffMismatchError, NonUnitSeriesError, WallCrossError
from src.wallcross.lattice import ZERO, BoundaryVector

Number = Union[int, Fraction]
TermKey = Tuple[BoundaryVector, Fraction]


class FiltrationMode(str, Enum):
    ENERGY = "energy"
    DEGREE = "degree"


@dataclass(frozen=True)
class Truncation:
    mode: FiltrationMode
    cutoff: Fraction

    def __post_init__(self):
        object.__setattr__(self, "mode", FiltrationMode(self.mode))
        object.__setattr__(self, "cutoff", Fraction(self.cutoff))
        if self.cutoff <= 0:
            raise WallCrossError(f"cutoff must be positive, got {self.cutoff}")
        if self.mode is FiltrationMode.DEGREE and self.cutoff.denominator != 1:
            raise WallCrossError(f"degree cutoff must be an integer, got {self.cutoff}")

    @classmethod
    def energy(cls, lam: Number) -> "Truncation":
        return cls(FiltrationMode.ENERGY, Fraction(lam))

    @classmethod
    def degree(cls, k: int) -> "Truncation":
        return cls(FiltrationMode.DEGREE, Fraction(k))

    def keeps(self, texp: Fraction) -> bool:
        if self.mode is FiltrationMode.ENERGY:
            return texp < self.cutoff
        return texp <= self.cutoff

    @property
    def energy_rate(self) -> int:
        # growth of a slab exponent per unit l per unit lattice parameter
        return 1 if self.mode is FiltrationMode.ENERGY else 0

    def __str__(self) -> str:
        return f"{self.mode.value}({self.cutoff})"


@dataclass(frozen=True)
class Monomial:
    coeff: Fraction
    zvec: BoundaryVector
    texp: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "texp", Fraction(self.texp))
        if self.texp < 0:
            raise WallCrossError(f"negative Novikov exponent {self.texp}")

    def render(self) -> str:
        if self.zvec.is_zero() and self.texp == 0:
            return str(self.coeff)
        parts = [str(self.coeff)]
        if not self.zvec.is_zero():
            parts.append(f"z^{self.zvec}")
        if self.texp != 0:
            parts.append(f"T^{{{self.texp}}}")
        return "·".join(parts)


class TruncatedSeries:
    __slots__ = ("_terms", "truncation", "_hash")

    def __init__(self, terms: Union[Mapping[TermKey, Number], Iterable[Monomial]], truncation: Truncation):
        acc: Dict[TermKey, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else ((((m.zvec, m.texp)), m.coeff) for m in terms)
        for (zvec, texp), coeff in items:
            texp = Fraction(texp)
            if texp < 0:
                raise WallCrossError(f"negative Novikov exponent {texp} at z^{zvec}")
            if not truncation.keeps(texp):
                continue
            key = (zvec, texp)
            acc[key] = acc.get(key, Fraction(0)) + Fraction(coeff)
        ordered = sorted(((k, c) for k, c in acc.items() if c != 0), key=lambda kc: (kc[0][1], kc[0][0]))
        self._terms: Tuple[Tuple[TermKey, Fraction], ...] = tuple(ordered)
        self.truncation = truncation
        self._hash: Optional[int] = None

    @classmethod
    def _collect(cls, acc: Dict[TermKey, Fraction], truncation: Truncation) -> "TruncatedSeries":
        """Build from an accumulator whose keys are already kept by the truncation."""
        out = cls.__new__(cls)
        out._terms = tuple(sorted(((k, c) for k, c in acc.items() if c), key=lambda kc: (kc[0][1], kc[0][0])))
        out.truncation = truncation
        out._hash = None
        return out

    # --- constructors ---
    @classmethod
    def zero(cls, truncation: Truncation) -> "TruncatedSeries":
        return cls({}, truncation)

    @classmethod
    def one(cls, truncation: Truncation) -> "TruncatedSeries":
        return cls({(ZERO, Fraction(0)): 1}, truncation)

    @classmethod
    def monomial(cls, coeff: Number, zvec: BoundaryVector, texp: Number, truncation: Truncation) -> "TruncatedSeries":
        return cls({(zvec, Fraction(texp)): coeff}, truncation)

    # --- inspection ---
    @property
    def terms(self) -> Tuple[Monomial, ...]:
        return tuple(Monomial(c, z, t) for (z, t), c in self._terms)

    def items(self) -> Iterator[Tuple[TermKey, Fraction]]:
        return iter(self._terms)

    def coefficient(self, zvec: BoundaryVector, texp: Number) -> Fraction:
        key = (zvec, Fraction(texp))
        for k, c in self._terms:
            if k == key:
                return c
        return Fraction(0)

    def constant_term(self) -> Fraction:
        return self.coefficient(ZERO, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return self._terms == (((ZERO, Fraction(0)), Fraction(1)),)

    def __len__(self) -> int:
        return len(self._terms)

    def min_texp(self) -> Optional[Fraction]:
        return self._terms[0][0][1] if self._terms else None

    def terms_at(self, texp: Fraction) -> Dict[BoundaryVector, Fraction]:
        return {z: c for (z, t), c in self._terms if t == texp}

    def has_positive_order(self) -> bool:
        """True when every term sits at texp > 0."""
        return all(t > 0 for (_, t), _ in self._terms)

    # --- arithmetic ---
    def _check(self, other: "TruncatedSeries") -> None:
        if self.truncation != other.truncation:
            raise CutoffMismatchError(f"cutoff mismatch: {self.truncation} vs {other.truncation}")

    def __add__(self, other: Union["TruncatedSeries", Number]) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.one(self.truncation).scale(other)
        self._check(other)
        acc = dict(self._terms)
        for k, c in other._terms:
            acc[k] = acc.get(k, Fraction(0)) + c
        return TruncatedSeries._collect(acc, self.truncation)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return self.scale(-1)

    def __sub__(self, other: Union["TruncatedSeries", Number]) -> "TruncatedSeries":
        return self + (-other)

    def __rsub__(self, other: Number) -> "TruncatedSeries":
        return (-self) + other

    def scale(self, c: Number) -> "TruncatedSeries":
        c = Fraction(c)
        return TruncatedSeries._collect({k: v * c for k, v in self._terms}, self.truncation)

    def __mul__(self, other: Union["TruncatedSeries", Number]) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        tr = self.truncation
        acc: Dict[TermKey, Fraction] = {}
        for (z1, t1), c1 in self._terms:
            for (z2, t2), c2 in other._terms:
                t = t1 + t2
                if not tr.keeps(t):
                    # both operands are sorted by texp
                    break
                key = (z1 + z2, t)
                acc[key] = acc.get(key, Fraction(0)) + c1 * c2
        return TruncatedSeries._collect(acc, tr)

    __rmul__ = __mul__

    def shift(self, zvec: BoundaryVector, texp: Number = 0) -> "TruncatedSeries":
        """Multiply by the monomial z^zvec T^texp."""
        texp = Fraction(texp)
        return TruncatedSeries({(z + zvec, t + texp): c for (z, t), c in self._terms}, self.truncation)

    def __pow__(self, n: int) -> "TruncatedSeries":
        if not isinstance(n, int):
            return pow_rational(self, Fraction(n))
        if n < 0:
            return pow_rational(self, Fraction(n))
        result = TruncatedSeries.one(self.truncation)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def retruncate(self, truncation: Truncation) -> "TruncatedSeries":
        return TruncatedSeries(dict(self._terms), truncation)

    def reflect(self) -> "TruncatedSeries":
        """z^v -> z^{-v}, Novikov exponents unchanged."""
        return TruncatedSeries._collect({(-z, t): c for (z, t), c in self._terms}, self.truncation)

    # --- comparison / rendering ---
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.truncation == other.truncation and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.truncation, self._terms))
        return self._hash

    def render(self) -> str:
        if not self._terms:
            return "0"
        out = ""
        for i, m in enumerate(self.terms):
            text = m.render()
            if i == 0:
                out = text
            elif text.startswith("-"):
                out += " - " + text[1:]
            else:
                out += " + " + text
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.render()!r}, {self.truncation})"


# --- module level operations ---

def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f + g


def mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f * g


def _unit_remainder(f: TruncatedSeries) -> TruncatedSeries:
    """g = f - 1 for f = 1 + (positive order part)."""
    if f.constant_term() != 1:
        raise NonUnitSeriesError(f"constant term must be 1, got {f.constant_term()} in {f.render()}")
    g = f - 1
    if not g.has_positive_order():
        raise NonUnitSeriesError(f"series has non-constant terms of Novikov order 0: {f.render()}")
    return g


def _geometric_sum(g: TruncatedSeries, coefficients: Iterator[Fraction]) -> TruncatedSeries:
    """sum_{n>=0} a_n g^n; g has positive order so the powers run out."""
    tr = g.truncation
    total = TruncatedSeries.zero(tr)
    power = TruncatedSeries.one(tr)
    for a in coefficients:
        if power.is_zero():
            break
        if a != 0:
            total = total + power.scale(a)
        power = power * g
    return total


def log1(f: TruncatedSeries) -> TruncatedSeries:
    g = _unit_remainder(f)

    def coeffs() -> Iterator[Fraction]:
        yield Fraction(0)
        n = 1
        while True:
            yield Fraction((-1) ** (n - 1), n)
            n += 1

    return _geometric_sum(g, coeffs())


def exp(g: TruncatedSeries) -> TruncatedSeries:
    if g.constant_term() != 0 or not g.has_positive_order():
        raise NonUnitSeriesError(f"exp needs a series of positive order, got {g.render()}")

    def coeffs() -> Iterator[Fraction]:
        c = Fraction(1)
        n = 0
        while True:
            yield c
            n += 1
            c = c / n

    return _geometric_sum(g, coeffs())


def pow_rational(f: TruncatedSeries, r: Number) -> TruncatedSeries:
    """(1 + g)^r by the binomial series; equals exp(r * log1(f))."""
    r = Fraction(r)
    g = _unit_remainder(f)

    def coeffs() -> Iterator[Fraction]:
        c = Fraction(1)
        n = 0
        while True:
            yield c
            c = c * (r - n) / (n + 1)
            n += 1

    return _geometric_sum(g, coeffs())


# --- one-variable helpers (x = z^(1,0), degree filtration) ---

def univariate(coefficients: Iterable[Number], order: int) -> TruncatedSeries:
    """sum a_k x^k as a degree-mode series truncated above x^order."""
    tr = Truncation.degree(order)
    return TruncatedSeries({(BoundaryVector(k, 0), Fraction(k)): a for k, a in enumerate(coefficients)}, tr)


def univariate_coefficients(f: TruncatedSeries, order: int) -> List[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for (z, _), c in f.items():
        if 0 <= z.a <= order:
            out[z.a] += c
    return out
