# -*- coding: utf-8 -*-
"""
Scattering diagrams on a rational planar chart.

A Scene lists focus-focus singularities; initial_diagram attaches the two
initial rays to each of them and complete() inserts rays stage by stage
until every loop product around a collision point is the identity modulo
the cutoff.

Slab exponents: a slab term (coeff, l, base) on a ray with origin o and
primitive direction d stands for coeff * z^{l d} * T^{base + l t} at
o + t d in energy mode, and for coeff * z^{l d} * T^{base} in degree mode.

Scene.sigma is only a label carried into the invariant tables. Wall
functions and the factorization use the sign (-1)^{l eps}, so changing sigma
never changes a computed value.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from src.wallcross.automorphism import (
    Covector,
    Endomorphism,
    InvariantTable,
    WallCrossingMap,
    compose,
    extract_invariants,
)
from src.wallcross.errors import (
    GenericityError,
    NonTerminatingStageError,
    SceneError,
    WallCrossError,
)
from src.wallcross.geometry import Box, Point, angle_key, line_intersection, param_on_ray
from src.wallcross.lattice import (
    REFINEMENTS,
    BoundaryVector,
    primitive_decompose,
    require_primitive,
)
from src.wallcross.novikov import FiltrationMode, Truncation, TruncatedSeries

logger = logging.getLogger(__name__)


# --- scene ---

@dataclass(frozen=True)
class Singularity:
    pos: Point
    direction: BoundaryVector
    multiplicity: int = 1

    def __str__(self) -> str:
        return f"I{self.multiplicity}@{self.pos} m={self.direction}"


@dataclass(frozen=True)
class Scene:
    singularities: Tuple[Singularity, ...]
    truncation: Truncation
    epsilon: int = 1
    sigma: str = "default"
    viewport: Optional[Box] = None

    def __post_init__(self):
        object.__setattr__(self, "singularities", tuple(self.singularities))

    def validate(self) -> None:
        if self.epsilon not in (0, 1):
            raise SceneError(f"epsilon must be 0 or 1, got {self.epsilon}")
        if self.sigma not in REFINEMENTS:
            raise SceneError(f"unknown sigma {self.sigma!r}")
        seen: Dict[Point, int] = {}
        for k, s in enumerate(self.singularities):
            require_primitive(s.direction, f"direction of singularity {k} at {s.pos}")
            if s.multiplicity < 1:
                raise SceneError(f"singularity {k} at {s.pos}: multiplicity must be >= 1")
            if s.pos in seen:
                raise SceneError(f"singularities {seen[s.pos]} and {k} share position {s.pos}")
            seen[s.pos] = k
        for k, s in enumerate(self.singularities):
            for sign in (1, -1):
                d = s.direction if sign > 0 else -s.direction
                j = self.singularity_on_ray(s.pos, d, exclude_origin=True)
                if j is not None:
                    other = self.singularities[j]
                    raise GenericityError(
                        f"initial ray of singularity {k} at {s.pos} in direction {d} "
                        f"hits singularity {j} at {other.pos}"
                    )

    def singularity_index(self, p: Point) -> Optional[int]:
        for k, s in enumerate(self.singularities):
            if s.pos == p:
                return k
        return None

    def singularity_on_ray(self, origin: Point, direction: BoundaryVector, exclude_origin: bool = True) -> Optional[int]:
        for k, s in enumerate(self.singularities):
            t = param_on_ray(origin, direction, s.pos)
            if t is None or t < 0 or (exclude_origin and t == 0):
                continue
            return k
        return None

    def mirrored(self) -> "Scene":
        """Point reflection: positions and invariant directions negated."""
        sings = tuple(Singularity(-s.pos, -s.direction, s.multiplicity) for s in self.singularities)
        box = None
        if self.viewport is not None:
            v = self.viewport
            box = Box(-v.xmax, -v.ymax, -v.xmin, -v.ymin)
        return replace(self, singularities=sings, viewport=box)

    def with_truncation(self, truncation: Truncation) -> "Scene":
        return replace(self, truncation=truncation)


# --- rays ---

@dataclass(frozen=True, order=True)
class SlabTerm:
    l: int
    base: Fraction
    coeff: Fraction

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.l < 1:
            raise WallCrossError(f"slab term needs l >= 1, got {self.l}")


@dataclass(frozen=True)
class Ray:
    origin: Point
    direction: BoundaryVector
    slab: Tuple[SlabTerm, ...]
    generation: int = 0
    parents: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "slab", tuple(sorted(self.slab)))
        object.__setattr__(self, "parents", tuple(self.parents))
        require_primitive(self.direction, f"direction of ray from {self.origin}")

    def classes(self) -> List[BoundaryVector]:
        return sorted({self.direction.scale(term.l) for term in self.slab})

    def param(self, p: Point) -> Optional[Fraction]:
        """Lattice parameter of p on the ray, None when p is not on the support."""
        t = param_on_ray(self.origin, self.direction, p)
        if t is None or t < 0:
            return None
        return t

    def describe(self, index: Optional[int] = None) -> str:
        label = f"ray {index}" if index is not None else "ray"
        return f"{label} from {self.origin} in direction {self.direction}"


@dataclass(frozen=True)
class Diagram:
    scene: Scene
    rays: Tuple[Ray, ...] = ()
    completed_to: Optional[Truncation] = None

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(self.rays))

    @property
    def truncation(self) -> Truncation:
        return self.completed_to or self.scene.truncation

    def inserted_rays(self) -> List[Ray]:
        return [r for r in self.rays if r.generation > 0]


def initial_diagram(scene: Scene) -> Diagram:
    scene.validate()
    degree_mode = scene.truncation.mode is FiltrationMode.DEGREE
    rays: List[Ray] = []
    for s in scene.singularities:
        n = s.multiplicity
        # (1 + z^{m} T^{t})^n expanded; in degree mode T counts factors
        slab = tuple(SlabTerm(l, Fraction(l) if degree_mode else Fraction(0), math.comb(n, l)) for l in range(1, n + 1))
        for d in (s.direction, -s.direction):
            rays.append(Ray(s.pos, d, slab, generation=0))
    logger.info("Initial diagram: %d singularities, %d rays", len(scene.singularities), len(rays))
    return Diagram(scene, tuple(rays))


@lru_cache(maxsize=65536)
def evaluate_slab(ray: Ray, p: Point, truncation: Truncation) -> TruncatedSeries:
    t = ray.param(p)
    if t is None:
        raise SceneError(f"point {p} is off {ray.describe()}")
    rate = truncation.energy_rate
    terms = {(BoundaryVector(0, 0), Fraction(0)): Fraction(1)}
    for term in ray.slab:
        key = (ray.direction.scale(term.l), term.base + rate * term.l * t)
        terms[key] = terms.get(key, Fraction(0)) + term.coeff
    return TruncatedSeries(terms, truncation)


# --- loops around points ---

@dataclass(frozen=True)
class Crossing:
    outward: BoundaryVector
    ray_index: int
    wall: WallCrossingMap


IndexedRays = Tuple[Tuple[int, Ray], ...]


def _rays_through(rays: Sequence[Ray], p: Point, indices: Optional[Iterable[int]] = None) -> IndexedRays:
    pool = range(len(rays)) if indices is None else sorted(indices)
    return tuple((i, rays[i]) for i in pool if rays[i].param(p) is not None)


def _live(through: IndexedRays, p: Point, truncation: Truncation) -> IndexedRays:
    return tuple((i, ray) for i, ray in through if not evaluate_slab(ray, p, truncation).is_one())


def active_rays(diagram: Diagram, p: Point, truncation: Truncation) -> List[Tuple[int, Fraction, TruncatedSeries]]:
    """(index, parameter, evaluated slab) for rays through p with slab != 1 mod cutoff."""
    return [
        (i, ray.param(p), evaluate_slab(ray, p, truncation))
        for i, ray in _live(_rays_through(diagram.rays, p), p, truncation)
    ]


def _crossings(live: IndexedRays, p: Point, truncation: Truncation) -> List[Crossing]:
    crossings: List[Crossing] = []
    for i, ray in live:
        d = ray.direction
        f = evaluate_slab(ray, p, truncation)
        outwards = (d, -d) if ray.param(p) > 0 else (d,)
        for e in outwards:
            crossings.append(Crossing(e, i, WallCrossingMap(d, Covector.pairing_with(e), f)))
    crossings.sort(key=lambda c: (angle_key(c.outward), c.ray_index))
    return crossings


def _reject_singular(diagram: Diagram, p: Point) -> None:
    if diagram.scene.singularity_index(p) is not None:
        raise SceneError(f"loop requested around singularity at {p}")


def loop_crossings(diagram: Diagram, p: Point, truncation: Truncation) -> List[Crossing]:
    _reject_singular(diagram, p)
    return _crossings(_live(_rays_through(diagram.rays, p), p, truncation), p, truncation)


def loop_product(diagram: Diagram, p: Point, truncation: Optional[Truncation] = None) -> Endomorphism:
    """Composite of the wall maps met by a small counterclockwise loop starting at direction (1,0)."""
    tr = truncation or diagram.truncation
    return compose([c.wall for c in loop_crossings(diagram, p, tr)], tr)


@dataclass(frozen=True)
class DefectTerm:
    boundary: BoundaryVector
    texp: Fraction
    coeff: Fraction

    def render(self) -> str:
        return f"{self.coeff}·e_{self.boundary}·T^{{{self.texp}}}"


@dataclass(frozen=True)
class LoopDefect:
    point: Point
    level: Fraction
    terms: Tuple[DefectTerm, ...]
    ray_indices: Tuple[int, ...] = ()


@lru_cache(maxsize=16384)
def _defect_of(p: Point, live: IndexedRays, truncation: Truncation) -> Optional[LoopDefect]:
    endo = compose([c.wall for c in _crossings(live, p, truncation)], truncation)
    u, w = endo.unit_parts()
    dx, dy = u - 1, w - 1
    levels = [s.min_texp() for s in (dx, dy) if not s.is_zero()]
    if not levels:
        return None
    a = min(levels)
    alpha = dx.terms_at(a)
    beta = dy.terms_at(a)
    terms = []
    for m in sorted(set(alpha) | set(beta)):
        am, bm = alpha.get(m, Fraction(0)), beta.get(m, Fraction(0))
        if m.is_zero():
            raise WallCrossError(f"loop at {p} has a defect in the flavor direction at T^{a}")
        if am * m.a + bm * m.b != 0:
            raise WallCrossError(f"loop defect at {p} in class {m} is not a Hamiltonian derivation")
        kappa = am / m.b if m.b != 0 else -bm / m.a
        if kappa != 0:
            terms.append(DefectTerm(m, a, kappa))
    if not terms:
        return None
    logger.debug("Defect at %s level %s: %s", p, a, ", ".join(t.render() for t in terms))
    return LoopDefect(p, a, tuple(terms), tuple(i for i, _ in live))


def loop_defect(diagram: Diagram, p: Point, truncation: Optional[Truncation] = None) -> Optional[LoopDefect]:
    """
    Lowest-order part of the loop product written as sum kappa_m T^a e_m,
    with e_m(z^v) = <v,m> z^{v+m}. None when the loop product is the identity.
    """
    tr = truncation or diagram.truncation
    _reject_singular(diagram, p)
    return _defect_of(p, _live(_rays_through(diagram.rays, p), p, tr), tr)


# --- collision points ---

@dataclass(frozen=True)
class CollisionPoint:
    point: Point
    directions: Tuple[Tuple[BoundaryVector, BoundaryVector], ...]


def _meeting_points(r1: Ray, r2: Ray) -> List[Point]:
    hit = line_intersection(r1.origin, r1.direction, r2.origin, r2.direction)
    if hit is not None:
        t1, t2 = hit
        return [r1.origin.along(r1.direction, t1)] if t1 >= 0 and t2 >= 0 else []
    # parallel supports meet only where one origin lies on the other ray
    points = []
    if r2.param(r1.origin) is not None:
        points.append(r1.origin)
    if r1.param(r2.origin) is not None:
        points.append(r2.origin)
    return points


@lru_cache(maxsize=64)
def _candidate_points(rays: Tuple[Ray, ...]) -> Tuple[Tuple[Point, Tuple[Tuple[int, int], ...]], ...]:
    found: Dict[Point, Set[Tuple[int, int]]] = {}
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            for p in _meeting_points(rays[i], rays[j]):
                found.setdefault(p, set()).add((i, j))
    return tuple((p, tuple(sorted(pairs))) for p, pairs in sorted(found.items()))


def collision_points(diagram: Diagram, truncation: Optional[Truncation] = None) -> List[CollisionPoint]:
    tr = truncation or diagram.truncation
    out = []
    for p, pairs in _candidate_points(diagram.rays):
        if diagram.scene.singularity_index(p) is not None:
            continue
        live = []
        for i, j in pairs:
            if evaluate_slab(diagram.rays[i], p, tr).is_one() or evaluate_slab(diagram.rays[j], p, tr).is_one():
                continue
            live.append((diagram.rays[i].direction, diagram.rays[j].direction))
        if live:
            out.append(CollisionPoint(p, tuple(live)))
    return out


# --- completion ---

def _new_rays(defect: LoopDefect, generation: int) -> List[Ray]:
    grouped: Dict[BoundaryVector, List[SlabTerm]] = {}
    for term in defect.terms:
        l, prim = primitive_decompose(term.boundary)
        grouped.setdefault(prim, []).append(SlabTerm(l, term.texp, l * term.coeff))
    return [
        Ray(defect.point, prim, tuple(grouped[prim]), generation, defect.ray_indices)
        for prim in sorted(grouped)
    ]


def _check_genericity(diagram: Diagram, ray: Ray, index: int, truncation: Truncation) -> None:
    scene = diagram.scene
    for k, s in enumerate(scene.singularities):
        t = ray.param(s.pos)
        if t is None or t == 0:
            continue
        if evaluate_slab(ray, s.pos, truncation).is_one():
            continue
        raise GenericityError(f"{ray.describe(index)} hits singularity {k} at {s.pos}")


class _MeetingIndex:
    """Rays through each meeting point, extended as rays are appended."""

    def __init__(self, scene: Scene):
        self.scene = scene
        self.rays: List[Ray] = []
        self.through: Dict[Point, Set[int]] = {}

    def append(self, ray: Ray) -> None:
        j = len(self.rays)
        for i, other in enumerate(self.rays):
            for p in _meeting_points(other, ray):
                self.through.setdefault(p, set()).update((i, j))
        self.rays.append(ray)

    def live_points(self, truncation: Truncation) -> List[Tuple[Point, IndexedRays]]:
        out = []
        for p in sorted(self.through):
            if self.scene.singularity_index(p) is not None:
                continue
            live = _live(_rays_through(self.rays, p, self.through[p]), p, truncation)
            if len(live) > 1:
                out.append((p, live))
        return out


def complete(
    diagram: Diagram,
    truncation: Optional[Truncation] = None,
    max_stages: int = 400,
    workers: int = 1,
) -> Diagram:
    tr = truncation or diagram.scene.truncation
    index = _MeetingIndex(diagram.scene)
    for ray in diagram.rays:
        index.append(ray)
    level: Optional[Fraction] = None

    for stage in range(1, max_stages + 1):
        points = index.live_points(tr)
        if workers > 1 and len(points) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                defects = list(pool.map(lambda pl: _defect_of(pl[0], pl[1], tr), points))
        else:
            defects = [_defect_of(p, live, tr) for p, live in points]
        found = [d for d in defects if d is not None]
        rays = index.rays
        if not found:
            logger.info("Completion done after %d stages: %d rays (%d inserted)", stage - 1, len(rays),
                        sum(1 for r in rays if r.generation > 0))
            return Diagram(diagram.scene, tuple(rays), tr)
        a = min(d.level for d in found)
        if level is not None and a <= level:
            raise NonTerminatingStageError(f"stage {stage} found a defect at level {a} <= previous level {level}")
        level = a
        current = Diagram(diagram.scene, tuple(rays))
        inserted = 0
        for d in sorted((d for d in found if d.level == a), key=lambda d: d.point):
            for ray in _new_rays(d, stage):
                _check_genericity(current, ray, len(index.rays), tr)
                index.append(ray)
                inserted += 1
        logger.info("Stage %d: level %s, %d collision points, %d rays inserted", stage, a, len(points), inserted)
    raise NonTerminatingStageError(f"completion did not finish within {max_stages} stages")


# --- consistency and queries ---

def check_consistency(diagram: Diagram, truncation: Optional[Truncation] = None) -> Dict[Point, List[DefectTerm]]:
    tr = truncation or diagram.truncation
    report: Dict[Point, List[DefectTerm]] = {}
    for c in collision_points(diagram, tr):
        d = loop_defect(diagram, c.point, tr)
        if d is not None:
            report[c.point] = list(d.terms)
    return report


def wall_product_at(
    diagram: Diagram,
    u: Point,
    direction: BoundaryVector,
    truncation: Optional[Truncation] = None,
) -> TruncatedSeries:
    """Product of the slab functions of the rays through u pointing along direction."""
    tr = truncation or diagram.truncation
    require_primitive(direction, "query direction")
    if diagram.scene.singularity_index(u) is not None:
        raise SceneError(f"invariants requested at singularity {u}")
    F = TruncatedSeries.one(tr)
    for ray in diagram.rays:
        if ray.direction != direction or ray.param(u) is None:
            continue
        F = F * evaluate_slab(ray, u, tr)
    return F


def invariants_at(
    diagram: Diagram,
    u: Point,
    direction: BoundaryVector,
    truncation: Optional[Truncation] = None,
    order: Optional[int] = None,
) -> InvariantTable:
    """
    Omega and Omega~ along direction at u. With an explicit order every
    multiple up to it must lie below the cutoff, else BeyondCutoffError.
    """
    F = wall_product_at(diagram, u, direction, truncation)
    scene = diagram.scene
    return extract_invariants(F, direction, scene.epsilon, scene.sigma, order)


@dataclass(frozen=True)
class WallDelta:
    point: Point
    boundary: BoundaryVector
    omega: Fraction
    omega_tilde: Fraction
    before: Optional[InvariantTable] = field(repr=False, compare=False, default=None)
    after: Optional[InvariantTable] = field(repr=False, compare=False, default=None)


def _side_step(diagram: Diagram, p: Point, prim: BoundaryVector) -> Fraction:
    """Half the distance (in lattice parameter) to the nearest other notable point on the line."""
    notable = [c.point for c in collision_points(diagram)]
    notable += [s.pos for s in diagram.scene.singularities]
    notable += [r.origin for r in diagram.rays]
    params = []
    for q in notable:
        s = param_on_ray(p, prim, q)
        if s is not None and s != 0:
            params.append(abs(s))
    return min(params) / 2 if params else Fraction(1)


def wall_delta(
    diagram: Diagram,
    p: Point,
    gamma: BoundaryVector,
    truncation: Optional[Truncation] = None,
) -> WallDelta:
    """
    Jump of (Omega, Omega~) of gamma across the collision point p: invariants
    on the outgoing side p + s m minus those on the incoming side p - s m.
    """
    tr = truncation or diagram.truncation
    l, prim = primitive_decompose(gamma)
    s = _side_step(diagram, p, prim)
    before = invariants_at(diagram, p.along(prim, -s), prim, tr, order=l)
    after = invariants_at(diagram, p.along(prim, s), prim, tr, order=l)
    return WallDelta(
        p,
        gamma,
        after.omega(l) - before.omega(l),
        after.omega_tilde(l) - before.omega_tilde(l),
        before,
        after,
    )


def sample_points(diagram: Diagram, initial: bool = True) -> List[Tuple[Point, BoundaryVector]]:
    """One generic query point per ray, just past its origin."""
    out = []
    for ray in diagram.rays:
        if ray.generation == 0 and not initial:
            continue
        s = _side_step(diagram, ray.origin, ray.direction)
        out.append((ray.origin.along(ray.direction, s), ray.direction))
    return out
