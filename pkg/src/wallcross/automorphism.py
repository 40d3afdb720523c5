# -*- coding: utf-8 -*-
"""
Wall-crossing automorphisms of the twisted torus ring.

A WallCrossingMap acts by z^v -> z^v * func^{n(v)} where n annihilates the
wall direction. Composites are represented by the images of the coordinate
monomials x = z^(1,0), y = z^(0,1).

Conventions used throughout:
  K_gamma^Omega : z^v -> z^v (1 - sigma(gamma) z^gamma T^E)^{Omega <v,gamma>}
  compose([A, B]) applies A to the coordinate images first, then B
  Omega_l  = d_l in the factorization prod (1 - (-1)^{k eps} x^k)^{k d_k}
  Omega~_l = [x^l] log F / l
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import divisors

from src.wallcross.errors import (
    BeyondCutoffError,
    CutoffMismatchError,
    IncoherentEnergyError,
    NonUnitSeriesError,
    WallCrossError,
)
from src.wallcross.lattice import (
    X_VEC,
    Y_VEC,
    ZERO,
    BoundaryVector,
    Charge,
    get_refinement,
    primitive_decompose,
    require_primitive,
)
from src.wallcross.novikov import (
    Number,
    Truncation,
    TruncatedSeries,
    log1,
    pow_rational,
    univariate,
    univariate_coefficients,
)

logger = logging.getLogger(__name__)

Refinement = Callable[[BoundaryVector], int]


@dataclass(frozen=True)
class Covector:
    a: int
    b: int

    def __call__(self, v: BoundaryVector) -> int:
        return self.a * v.a + self.b * v.b

    def __neg__(self) -> "Covector":
        return Covector(-self.a, -self.b)

    @classmethod
    def pairing_with(cls, e: BoundaryVector) -> "Covector":
        """The covector v -> <e, v>."""
        return cls(-e.b, e.a)


@dataclass(frozen=True)
class WallCrossingMap:
    direction: BoundaryVector
    normal: Covector
    func: TruncatedSeries

    def __post_init__(self):
        if self.func.is_one():
            return
        require_primitive(self.direction, "wall direction")
        if self.normal(self.direction) != 0:
            raise WallCrossError(f"normal {self.normal} does not annihilate {self.direction}")
        if self.func.constant_term() != 1 or not (self.func - 1).has_positive_order():
            raise NonUnitSeriesError(f"wall function must be 1 mod positive order: {self.func.render()}")
        for m in self.func.terms:
            if m.zvec.is_zero():
                continue
            if m.zvec.a * self.direction.b != m.zvec.b * self.direction.a:
                raise WallCrossError(f"wall function term {m.render()} not along {self.direction}")

    @property
    def truncation(self) -> Truncation:
        return self.func.truncation

    def is_identity(self) -> bool:
        return self.func.is_one() or (self.normal.a == 0 and self.normal.b == 0)

    def inverse(self) -> "WallCrossingMap":
        return WallCrossingMap(self.direction, -self.normal, self.func)

    def __call__(self, f: TruncatedSeries) -> TruncatedSeries:
        return apply(self, f)

    def to_endomorphism(self) -> "Endomorphism":
        return Endomorphism.identity(self.truncation).then(self)


@lru_cache(maxsize=4096)
def _wall_power(func: TruncatedSeries, k: int) -> TruncatedSeries:
    return func ** k


def apply(wall: WallCrossingMap, f: TruncatedSeries) -> TruncatedSeries:
    if wall.is_identity():
        return f
    tr = f.truncation
    if wall.truncation != tr:
        raise CutoffMismatchError(f"cutoff mismatch: {wall.truncation} vs {tr}")
    acc: Dict[Tuple[BoundaryVector, Fraction], Fraction] = {}
    for (zvec, texp), coeff in f.items():
        for (z, t), c in _wall_power(wall.func, wall.normal(zvec)).items():
            t = t + texp
            if not tr.keeps(t):
                # powers are sorted by texp
                break
            key = (z + zvec, t)
            acc[key] = acc.get(key, Fraction(0)) + c * coeff
    return TruncatedSeries._collect(acc, tr)


@dataclass(frozen=True)
class Endomorphism:
    """Ring endomorphism given by the images of x and y."""
    x_image: TruncatedSeries
    y_image: TruncatedSeries

    @classmethod
    def identity(cls, truncation: Truncation) -> "Endomorphism":
        return cls(
            TruncatedSeries.monomial(1, X_VEC, 0, truncation),
            TruncatedSeries.monomial(1, Y_VEC, 0, truncation),
        )

    @property
    def truncation(self) -> Truncation:
        return self.x_image.truncation

    def then(self, wall: WallCrossingMap) -> "Endomorphism":
        return Endomorphism(apply(wall, self.x_image), apply(wall, self.y_image))

    def unit_parts(self) -> Tuple[TruncatedSeries, TruncatedSeries]:
        """(u, w) with x_image = x u and y_image = y w."""
        return self.x_image.shift(-X_VEC), self.y_image.shift(-Y_VEC)

    def is_identity(self) -> bool:
        return self == Endomorphism.identity(self.truncation)


def compose(maps: Sequence[WallCrossingMap], truncation: Truncation) -> Endomorphism:
    result = Endomorphism.identity(truncation)
    for m in maps:
        result = result.then(m)
    return result


# --- elementary transforms ---

@dataclass(frozen=True)
class KFactor:
    charge: Charge
    exponent: Fraction

    def render(self) -> str:
        return f"K[{self.charge.boundary},E={self.charge.energy}]^{self.exponent}"


def render_k_factors(factors: Sequence[KFactor]) -> str:
    if not factors:
        return "1"
    return " · ".join(k.render() for k in factors)


def elementary_K(charge: Charge, omega: Number, sigma: Union[str, Refinement], truncation: Truncation) -> WallCrossingMap:
    sigma_fn = get_refinement(sigma) if isinstance(sigma, str) else sigma
    one = TruncatedSeries.one(truncation)
    if charge.boundary.is_zero():
        logger.warning("pure flavor charge %s: K is the identity", charge)
        return WallCrossingMap(ZERO, Covector(0, 0), one)
    l, prim = primitive_decompose(charge.boundary)
    omega = Fraction(omega)
    if omega == 0:
        return WallCrossingMap(prim, Covector.pairing_with(prim), one)
    base = one - TruncatedSeries.monomial(sigma_fn(charge.boundary), charge.boundary, charge.energy, truncation)
    func = pow_rational(base, omega * l)
    # <v, gamma> = l <v, prim> = -l <prim, v>
    return WallCrossingMap(prim, -Covector.pairing_with(prim), func)


def epsilon_sign(epsilon: int) -> Refinement:
    """Sign (-1)^{l eps} of the class l * prim, as it enters the one-variable factorization."""
    return lambda gamma: _sign(primitive_decompose(gamma)[0], epsilon)


def k_factor_map(factor: KFactor, epsilon: int, truncation: Truncation) -> WallCrossingMap:
    return elementary_K(factor.charge, factor.exponent, epsilon_sign(epsilon), truncation)


# --- one variable factorization and the Moebius transform ---

def _sign(k: int, epsilon: int) -> int:
    return -1 if (k * epsilon) % 2 else 1


def factorize_unit_series(coefficients: Sequence[Number], epsilon: int, order: int) -> Dict[int, Fraction]:
    """
    d_k (1 <= k <= order) with f = prod_k (1 - (-1)^{k eps} x^k)^{k d_k} mod x^{order+1},
    for f = sum a_k x^k given by its coefficient list (a_0 = 1).
    """
    if epsilon not in (0, 1):
        raise WallCrossError(f"epsilon must be 0 or 1, got {epsilon}")
    coeffs = [Fraction(c) for c in list(coefficients)[: order + 1]]
    if not coeffs or coeffs[0] != 1:
        raise NonUnitSeriesError("factorization needs f = 1 mod x")
    g = univariate(coeffs, order)
    d: Dict[int, Fraction] = {}
    for k in range(1, order + 1):
        a_k = univariate_coefficients(g, order)[k]
        s_k = _sign(k, epsilon)
        d_k = -a_k / (k * s_k)
        d[k] = d_k
        if d_k != 0:
            factor = univariate([1] + [0] * (k - 1) + [-s_k], order)
            g = g * pow_rational(factor, -k * d_k)
    return d


def expand_factorization(d: Mapping[int, Number], epsilon: int, order: int) -> List[Fraction]:
    """Coefficients of prod_k (1 - (-1)^{k eps} x^k)^{k d_k} up to x^order."""
    g = univariate([1], order)
    for k, d_k in sorted(d.items()):
        if k > order or d_k == 0:
            continue
        factor = univariate([1] + [0] * (k - 1) + [-_sign(k, epsilon)], order)
        g = g * pow_rational(factor, k * Fraction(d_k))
    return univariate_coefficients(g, order)


def mobius_transform(d: Mapping[int, Number], order: int) -> Dict[int, Fraction]:
    """c(n) = sum_{k | n} d_{n/k} / k^2 for 1 <= n <= order."""
    c: Dict[int, Fraction] = {}
    for n in range(1, order + 1):
        c[n] = sum((Fraction(d.get(n // k, 0)) / (k * k) for k in divisors(n)), Fraction(0))
    return c


def log_identity_holds(d: Mapping[int, Number], epsilon: int, order: int) -> bool:
    """
    Termwise check of sum_k k d_k log(1 - (-1)^{k eps} x^k) = - sum_n n c(n) u^n,
    u = (-1)^eps x, up to x^order.
    """
    lhs = univariate([0], order)
    for k, d_k in d.items():
        if k > order or d_k == 0:
            continue
        factor = univariate([1] + [0] * (k - 1) + [-_sign(k, epsilon)], order)
        lhs = lhs + log1(factor).scale(k * Fraction(d_k))
    c = mobius_transform(d, order)
    rhs = univariate([0] + [-n * c[n] * _sign(n, epsilon) for n in range(1, order + 1)], order)
    return lhs == rhs


# --- invariant extraction ---

@dataclass(frozen=True)
class InvariantTable:
    direction: BoundaryVector
    epsilon: int
    sigma: str
    order: int
    energy_unit: Optional[Fraction] = None
    omega_values: Dict[int, Fraction] = field(default_factory=dict)
    omega_tilde_values: Dict[int, Fraction] = field(default_factory=dict)

    def omega(self, l: int) -> Fraction:
        return self.omega_values.get(l, Fraction(0))

    def omega_tilde(self, l: int) -> Fraction:
        return self.omega_tilde_values.get(l, Fraction(0))

    def __getitem__(self, l: int) -> Tuple[Fraction, Fraction]:
        return self.omega(l), self.omega_tilde(l)

    def is_zero(self) -> bool:
        return not any(self.omega_values.values()) and not any(self.omega_tilde_values.values())

    def k_factors(self) -> List[KFactor]:
        unit = self.energy_unit or Fraction(0)
        return [
            KFactor(Charge(self.direction.scale(l), unit * l), om)
            for l, om in sorted(self.omega_values.items())
            if om != 0
        ]

    def render(self) -> str:
        lines = [f"direction={self.direction} epsilon={self.epsilon} sigma={self.sigma}", "l\tOmega\tOmega~"]
        for l in range(1, self.order + 1):
            lines.append(f"{l}\t{self.omega(l)}\t{self.omega_tilde(l)}")
        return "\n".join(lines)


def _factorization_order(unit: Fraction, truncation: Truncation) -> int:
    if unit <= 0:
        raise IncoherentEnergyError("incoherent energies at query point")
    n = 0
    while truncation.keeps(unit * (n + 1)):
        n += 1
    return n


def extract_invariants(
    F: TruncatedSeries,
    direction: BoundaryVector,
    epsilon: int = 1,
    sigma: str = "default",
    order: Optional[int] = None,
) -> InvariantTable:
    require_primitive(direction, "query direction")
    if F.constant_term() != 1:
        raise NonUnitSeriesError(f"wall product must be 1 mod positive order: {F.render()}")
    energies: Dict[int, Fraction] = {}
    coeff_by_l: Dict[int, Fraction] = {}
    for (zvec, texp), c in F.items():
        if zvec.is_zero() and texp == 0:
            continue
        l = _multiple_of(zvec, direction)
        if l is None or l <= 0:
            raise WallCrossError(f"term z^{zvec} T^{texp} is not a positive power of z^{direction}")
        if l in energies and energies[l] != texp:
            raise IncoherentEnergyError("incoherent energies at query point")
        energies[l] = texp
        coeff_by_l[l] = c
    if not energies:
        return InvariantTable(direction, epsilon, sigma, order or 0)
    units = {energies[l] / l for l in energies}
    if len(units) != 1:
        raise IncoherentEnergyError("incoherent energies at query point")
    unit = units.pop()
    supported = _factorization_order(unit, F.truncation)
    if order is None:
        order = supported
    elif order > supported:
        raise BeyondCutoffError(
            f"multiple l={order} of {direction} sits at T^{{{unit * order}}}, beyond the cutoff {F.truncation}"
        )
    coeffs = [Fraction(1)] + [coeff_by_l.get(l, Fraction(0)) for l in range(1, order + 1)]
    d = factorize_unit_series(coeffs, epsilon, order)
    logs = univariate_coefficients(log1(univariate(coeffs, order)), order)
    omega = {l: d[l] for l in range(1, order + 1)}
    omega_tilde = {l: logs[l] / l for l in range(1, order + 1)}
    return InvariantTable(direction, epsilon, sigma, order, unit, omega, omega_tilde)


def _multiple_of(v: BoundaryVector, direction: BoundaryVector) -> Optional[int]:
    if v.a * direction.b != v.b * direction.a:
        return None
    if direction.a != 0:
        return v.a // direction.a if v.a % direction.a == 0 else None
    return v.b // direction.b if v.b % direction.b == 0 else None


def mobius_omega_tilde(table: InvariantTable) -> Dict[int, Fraction]:
    """Omega~ recomputed from Omega: -(-1)^{l eps} sum_{k|l} Omega_{l/k} / k^2."""
    c = mobius_transform(table.omega_values, table.order)
    return {l: -_sign(l, table.epsilon) * c[l] for l in range(1, table.order + 1)}


# --- symplectic form ---

def _euler(f: TruncatedSeries, axis: int) -> TruncatedSeries:
    return TruncatedSeries(
        {(z, t): c * (z.a if axis == 0 else z.b) for (z, t), c in f.items()},
        f.truncation,
    )


def check_symplectic(wall: Union[WallCrossingMap, Endomorphism]) -> bool:
    """
    Pullback of dlog x ^ dlog y equals dlog x ^ dlog y up to truncation.
    With x -> x u, y -> y w the Jacobian factor is
    (1 + Dx log u)(1 + Dy log w) - (Dy log u)(Dx log w), Dx = x d/dx.
    """
    endo = wall.to_endomorphism() if isinstance(wall, WallCrossingMap) else wall
    u, w = endo.unit_parts()
    try:
        lu, lw = log1(u), log1(w)
    except NonUnitSeriesError:
        return False
    one = TruncatedSeries.one(endo.truncation)
    jac = (one + _euler(lu, 0)) * (one + _euler(lw, 1)) - _euler(lu, 1) * _euler(lw, 0)
    return jac == one
