# -*- coding: utf-8 -*-
"""
Tropical discs with a stop, their multiplicities and weights, brute-force
N^trop counts with fixed-position incoming lines, and the tropical
wall-crossing sum that serves as an oracle for the scattering engine.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
from sympy.utilities.iterables import partitions

from src.wallcross.engine import Scene
from src.wallcross.errors import DegeneratePositionError, NonTrivalentVertexError, WallCrossError
from src.wallcross.geometry import Point, cross, line_intersection, param_on_ray
from src.wallcross.lattice import BoundaryVector, is_primitive, require_primitive

logger = logging.getLogger(__name__)

VertexPos = Union[Point, int]  # a plane point, or the index of a singularity


# --- discs ---

@dataclass(frozen=True)
class DiscEdge:
    """Edge oriented toward the stop; direction is primitive and points the same way."""
    src: str
    dst: str
    weight: int
    direction: BoundaryVector


@dataclass(frozen=True)
class TropicalDisc:
    vertices: Mapping[str, VertexPos]
    edges: Tuple[DiscEdge, ...]
    root: str

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.edges:
            g.add_edge(e.src, e.dst, edge=e)
        return g

    def position(self, vid: str, scene: Optional[Scene] = None) -> Point:
        pos = self.vertices[vid]
        if isinstance(pos, Point):
            return pos
        if scene is None:
            raise WallCrossError(f"vertex {vid} sits on singularity {pos}; a scene is needed")
        return scene.singularities[pos].pos

    def incoming(self, vid: str) -> List[DiscEdge]:
        return [e for e in self.edges if e.dst == vid]

    def outgoing(self, vid: str) -> List[DiscEdge]:
        return [e for e in self.edges if e.src == vid]

    def leaves(self) -> List[str]:
        return sorted(v for v in self.vertices if v != self.root and not self.incoming(v))

    def internal_vertices(self) -> List[str]:
        return sorted(v for v in self.vertices if v != self.root and self.incoming(v))

    def boundary_class(self) -> BoundaryVector:
        total = BoundaryVector(0, 0)
        for e in self.incoming(self.root):
            total = total + e.direction.scale(e.weight)
        return total


def _edge_length(disc: TropicalDisc, e: DiscEdge, scene: Optional[Scene]) -> Optional[Fraction]:
    """Lattice length of an embedded edge, None when it is not along its direction."""
    t = param_on_ray(disc.position(e.src, scene), e.direction, disc.position(e.dst, scene))
    if t is None or t < 0:
        return None
    return t


def validate(disc: TropicalDisc, scene: Scene) -> List[str]:
    violations: List[str] = []
    g = disc.graph()
    if disc.root not in disc.vertices:
        return [f"root {disc.root} is not a vertex"]
    if not nx.is_tree(g.to_undirected(as_view=True)) or g.number_of_edges() != len(disc.edges):
        violations.append("graph is not a tree")
    if isinstance(disc.vertices[disc.root], int) or scene.singularity_index(disc.position(disc.root, scene)) is not None:
        violations.append(f"stop {disc.root} maps to a singularity")
    if disc.outgoing(disc.root):
        violations.append(f"stop {disc.root} has an outgoing edge")
    for vid in sorted(disc.vertices):
        if vid != disc.root and len(disc.outgoing(vid)) != 1:
            violations.append(f"vertex {vid} must have exactly one edge toward the stop")
    for e in disc.edges:
        if e.weight < 1:
            violations.append(f"edge {e.src}->{e.dst} has weight {e.weight}")
        if not is_primitive(e.direction):
            violations.append(f"edge {e.src}->{e.dst} direction {e.direction} is not primitive")
            continue
        if _edge_length(disc, e, scene) is None:
            violations.append(f"edge {e.src}->{e.dst} is not along {e.direction}")
    for vid in disc.leaves():
        pos = disc.vertices[vid]
        k = pos if isinstance(pos, int) else scene.singularity_index(pos)
        if k is None:
            violations.append(f"leaf {vid} at {pos} is not a singularity")
            continue
        m = scene.singularities[k].direction
        for e in disc.outgoing(vid):
            if e.direction not in (m, -m):
                violations.append(f"leaf edge {vid}->{e.dst} leaves singularity {k} off its invariant line {m}")
    for vid in disc.internal_vertices():
        flow = BoundaryVector(0, 0)
        for e in disc.incoming(vid):
            flow = flow + e.direction.scale(e.weight)
        for e in disc.outgoing(vid):
            flow = flow - e.direction.scale(e.weight)
        if not flow.is_zero():
            violations.append(f"vertex {vid} is not balanced (residual {flow})")
    return violations


def vertex_multiplicity(w1: int, m1: BoundaryVector, w2: int, m2: BoundaryVector) -> int:
    return w1 * w2 * abs(m1.a * m2.b - m1.b * m2.a)


def disc_multiplicity(disc: TropicalDisc) -> int:
    mult = 1
    for vid in disc.internal_vertices():
        ins = disc.incoming(vid)
        if len(ins) + len(disc.outgoing(vid)) != 3:
            raise NonTrivalentVertexError(f"vertex {vid} has valency {len(ins) + len(disc.outgoing(vid))}")
        e1, e2 = ins
        mult *= vertex_multiplicity(e1.weight, e1.direction, e2.weight, e2.direction)
    return mult


def multiple_cover_weight(d: int, multiplicity: int = 1) -> Fraction:
    """n (-1)^{d-1} / d^2, the contribution of a weight-d edge at an I_n singularity."""
    return Fraction(multiplicity * (-1) ** (d - 1), d * d)


def disc_weight(disc: TropicalDisc, scene: Optional[Scene] = None) -> Fraction:
    weight = Fraction(disc_multiplicity(disc))
    for vid in disc.leaves():
        pos = disc.vertices[vid]
        n = 1
        if scene is not None:
            k = pos if isinstance(pos, int) else scene.singularity_index(pos)
            if k is not None:
                n = scene.singularities[k].multiplicity
        for e in disc.outgoing(vid):
            weight *= multiple_cover_weight(e.weight, n)
    return weight


def disc_automorphism_order(disc: TropicalDisc) -> int:
    """Permutations of leaf edges sharing singularity, weight and direction."""
    groups = Counter()
    for vid in disc.leaves():
        for e in disc.outgoing(vid):
            groups[(disc.vertices[vid], e.weight, e.direction)] += 1
    order = 1
    for count in groups.values():
        order *= math.factorial(count)
    return order


def disc_energy(disc: TropicalDisc, scene: Optional[Scene] = None) -> Fraction:
    total = Fraction(0)
    for e in disc.edges:
        length = _edge_length(disc, e, scene)
        if length is None:
            raise WallCrossError(f"edge {e.src}->{e.dst} is not along {e.direction}")
        total += e.weight * length
    return total


# --- N^trop with fixed-position lines ---

@dataclass(frozen=True)
class IncomingFamily:
    direction: BoundaryVector
    weights: Tuple[int, ...]


@dataclass(frozen=True)
class _Leg:
    """Outgoing edge of a subtree: a free line for a leaf, a ray from its vertex otherwise."""
    anchor: Point
    velocity: BoundaryVector  # sum of weight * direction over the subtree's leaves
    free: bool
    mult: int


def _trees(labels: FrozenSet[int]) -> List[object]:
    return list(_trees_cached(labels))


@lru_cache(maxsize=None)
def _trees_cached(labels: FrozenSet[int]) -> Tuple[object, ...]:
    if len(labels) == 1:
        return (next(iter(labels)),)
    first = min(labels)
    rest = sorted(labels - {first})
    out = []
    for r in range(0, len(rest)):
        for extra in itertools.combinations(rest, r):
            left = frozenset((first,) + extra)
            right = labels - left
            for a in _trees_cached(left):
                for b in _trees_cached(right):
                    out.append((a, b))
    return tuple(out)


def _embed(tree, legs: Sequence[_Leg]) -> Optional[_Leg]:
    if isinstance(tree, int):
        return legs[tree]
    a = _embed(tree[0], legs)
    if a is None:
        return None
    b = _embed(tree[1], legs)
    if b is None:
        return None
    hit = line_intersection(a.anchor, _primitive(a.velocity), b.anchor, _primitive(b.velocity))
    if hit is None:
        if param_on_ray(a.anchor, _primitive(a.velocity), b.anchor) is not None:
            raise DegeneratePositionError(f"collinear legs through {a.anchor} and {b.anchor}")
        return None
    ta, tb = hit
    for leg, t in ((a, ta), (b, tb)):
        if not leg.free and t == 0:
            raise DegeneratePositionError(f"vertex collides with the vertex at {leg.anchor}")
        if not leg.free and t < 0:
            return None
    vertex = a.anchor.along(_primitive(a.velocity), ta)
    mult = abs(cross((a.velocity.a, a.velocity.b), (b.velocity.a, b.velocity.b)))
    velocity = a.velocity + b.velocity
    if velocity.is_zero():
        return None
    return _Leg(vertex, velocity, False, a.mult * b.mult * int(mult))


def _primitive(v: BoundaryVector) -> BoundaryVector:
    g = math.gcd(abs(v.a), abs(v.b))
    return BoundaryVector(v.a // g, v.b // g)


def random_anchors(count: int, seed: int = 7, denominator: int = 97) -> List[Point]:
    rng = random.Random(seed)
    span = 10 * denominator
    return [
        Point(Fraction(rng.randint(-span, span), denominator), Fraction(rng.randint(-span, span), denominator))
        for _ in range(count)
    ]


def enumerate_Ntrop(
    incoming: Sequence[IncomingFamily],
    anchors: Optional[Sequence[Point]] = None,
    seed: int = 7,
    denominator: int = 97,
    max_total_weight: int = 6,
) -> int:
    """
    Weighted number of rational tropical curves whose incoming legs are the
    given lines (one per weight entry, fixed generic positions) and whose
    single outgoing leg is unbounded.
    """
    leg_weights: List[Tuple[BoundaryVector, int]] = []
    for fam in incoming:
        require_primitive(fam.direction, "incoming direction")
        leg_weights.extend((fam.direction, w) for w in fam.weights)
    if sum(w for _, w in leg_weights) > max_total_weight:
        raise WallCrossError(f"total weight {sum(w for _, w in leg_weights)} exceeds bound {max_total_weight}")
    if len(leg_weights) < 2:
        return 0
    if anchors is None:
        anchors = random_anchors(len(leg_weights), seed, denominator)
    if len(anchors) != len(leg_weights):
        raise WallCrossError(f"{len(anchors)} anchors for {len(leg_weights)} legs")
    legs = [_Leg(anchors[i], d.scale(w), True, 1) for i, (d, w) in enumerate(leg_weights)]
    total = 0
    for tree in _trees(frozenset(range(len(legs)))):
        out = _embed(tree, legs)
        if out is not None:
            total += out.mult
    return total


def count_ntrop(incoming: Sequence[IncomingFamily], seed: int = 7, denominator: int = 97,
                max_total_weight: int = 6, attempts: int = 5) -> int:
    """enumerate_Ntrop with fresh random positions whenever a choice turns out degenerate."""
    for k in range(attempts):
        try:
            return enumerate_Ntrop(incoming, None, seed + k, denominator, max_total_weight)
        except DegeneratePositionError as e:
            logger.warning("Degenerate positions with seed %d (%s), retrying", seed + k, e)
    raise DegeneratePositionError(f"no generic positions found in {attempts} attempts")


# --- the tropical wall-crossing sum ---

OmegaTilde = Callable[[int], Fraction]


def initial_omega_tilde(multiplicity: int = 1) -> OmegaTilde:
    return lambda d: multiple_cover_weight(d, multiplicity)


@dataclass(frozen=True)
class SumComponent:
    weights: Tuple[Tuple[int, ...], ...]
    ntrop: int
    aut: int
    product: Fraction

    @property
    def value(self) -> Fraction:
        return Fraction(self.ntrop, self.aut) * self.product


@dataclass(frozen=True)
class WallCrossingSum:
    target: BoundaryVector
    components: Tuple[SumComponent, ...] = field(default_factory=tuple)

    @property
    def total(self) -> Fraction:
        return sum((c.value for c in self.components), Fraction(0))

    def values(self) -> List[Fraction]:
        return [c.value for c in self.components]


def _partitions_of(n: int) -> List[Tuple[int, ...]]:
    if n == 0:
        return [()]
    out = []
    for p in partitions(n):
        # sympy reuses the yielded dict
        parts: List[int] = []
        for part, count in sorted(p.items(), reverse=True):
            parts.extend([part] * count)
        out.append(tuple(parts))
    return out


def _aut(weights: Tuple[int, ...]) -> int:
    order = 1
    for count in Counter(weights).values():
        order *= math.factorial(count)
    return order


def wall_crossing_sum(
    target: BoundaryVector,
    incoming: Sequence[Tuple[BoundaryVector, OmegaTilde]],
    max_total_weight: int = 6,
    seed: int = 7,
    denominator: int = 97,
) -> WallCrossingSum:
    """
    Omega~ jump of the target class: sum over weight vectors w with
    sum |w_i| gamma_i = target of N^trop(w)/|Aut(w)| * prod Omega~(w_ij gamma_i).
    """
    for gamma, _ in incoming:
        require_primitive(gamma, "incoming class")
    ranges = [range(0, max_total_weight + 1) for _ in incoming]
    components: List[SumComponent] = []
    for ns in itertools.product(*ranges):
        if sum(ns) > max_total_weight:
            continue
        total = BoundaryVector(0, 0)
        for n, (gamma, _) in zip(ns, incoming):
            total = total + gamma.scale(n)
        if total != target:
            continue
        for choice in itertools.product(*(_partitions_of(n) for n in ns)):
            if sum(len(w) for w in choice) < 2:
                continue
            product = Fraction(1)
            for w, (_, omega_tilde) in zip(choice, incoming):
                for wij in w:
                    product *= omega_tilde(wij)
            if product == 0:
                continue
            families = [IncomingFamily(gamma, w) for w, (gamma, _) in zip(choice, incoming) if w]
            ntrop = count_ntrop(families, seed, denominator, max_total_weight)
            aut = 1
            for w in choice:
                aut *= _aut(w)
            components.append(SumComponent(tuple(choice), ntrop, aut, product))
    return WallCrossingSum(target, tuple(components))


# --- discs in a scene ending at a stop ---

NUDGE = Fraction(1, 10000)


def _split(v: BoundaryVector) -> Tuple[int, BoundaryVector]:
    g = math.gcd(abs(v.a), abs(v.b))
    return g, BoundaryVector(v.a // g, v.b // g)


def _disc_from_tree(tree, leaves: Sequence[Tuple[int, BoundaryVector, int]], scene: Scene, stop: Point) -> TropicalDisc:
    """Place a leaf tree on the unperturbed scene; leaves[i] = (singularity, direction, weight)."""
    vertices: Dict[str, VertexPos] = {"stop": stop}
    edges: List[DiscEdge] = []
    counter = itertools.count()

    def build(node) -> Tuple[str, Point, BoundaryVector]:
        if isinstance(node, int):
            k, d, w = leaves[node]
            vid = f"leaf{node}"
            vertices[vid] = k
            return vid, scene.singularities[k].pos, d.scale(w)
        a_id, a_pos, a_vel = build(node[0])
        b_id, b_pos, b_vel = build(node[1])
        hit = line_intersection(a_pos, _primitive(a_vel), b_pos, _primitive(b_vel))
        if hit is None:
            raise DegeneratePositionError(f"parallel edges meet at a vertex near {a_pos}")
        pos = a_pos.along(_primitive(a_vel), hit[0])
        vid = f"v{next(counter)}"
        vertices[vid] = pos
        for child, vel in ((a_id, a_vel), (b_id, b_vel)):
            g, prim = _split(vel)
            edges.append(DiscEdge(child, vid, g, prim))
        return vid, pos, a_vel + b_vel

    root, _, total = build(tree)
    g, prim = _split(total)
    edges.append(DiscEdge(root, "stop", g, prim))
    return TropicalDisc(vertices, tuple(edges), "stop")


def _leaf_trees(leaves: Sequence[Tuple[int, BoundaryVector, int]], scene: Scene, seed: int, denominator: int,
                attempts: int) -> List[object]:
    """Leaf trees that embed once each leaf ray starts at a slightly nudged singularity."""
    labels = frozenset(range(len(leaves)))
    for k in range(attempts):
        offsets = random_anchors(len(leaves), seed + k, denominator)
        legs = []
        for (j, d, w), off in zip(leaves, offsets):
            pos = scene.singularities[j].pos
            legs.append(_Leg(Point(pos.x + NUDGE * off.x, pos.y + NUDGE * off.y), d.scale(w), False, 1))
        try:
            return [t for t in _trees(labels) if _embed(t, legs) is not None]
        except DegeneratePositionError as e:
            logger.warning("Degenerate nudge with seed %d (%s), retrying", seed + k, e)
    raise DegeneratePositionError(f"no generic nudge found in {attempts} attempts")


def enumerate_discs(
    scene: Scene,
    stop: Point,
    target: BoundaryVector,
    max_total_weight: int = 6,
    seed: int = 7,
    denominator: int = 97,
    attempts: int = 5,
) -> List[TropicalDisc]:
    """
    Trivalent discs of boundary class target whose leaves sit on singularities
    and whose last edge ends at stop, one per labelled leaf tree. Leaves of a
    singularity leave along +m or -m with any weights of total at most
    max_total_weight.
    """
    if scene.singularity_index(stop) is not None:
        raise DegeneratePositionError(f"stop {stop} is a singularity")
    families = [(k, s.direction.scale(sign)) for k, s in enumerate(scene.singularities) for sign in (1, -1)]
    discs: List[TropicalDisc] = []
    for ns in itertools.product(range(max_total_weight + 1), repeat=len(families)):
        if not 0 < sum(ns) <= max_total_weight:
            continue
        total = BoundaryVector(0, 0)
        for n, (_, d) in zip(ns, families):
            total = total + d.scale(n)
        if total != target:
            continue
        for choice in itertools.product(*(_partitions_of(n) for n in ns)):
            leaves = [(k, d, w) for (k, d), ws in zip(families, choice) for w in ws]
            for tree in _leaf_trees(leaves, scene, seed, denominator, attempts):
                disc = _disc_from_tree(tree, leaves, scene, stop)
                last = disc.incoming("stop")[0]
                if _edge_length(disc, last, scene) is None:
                    continue
                problems = validate(disc, scene)
                if problems:
                    raise DegeneratePositionError(f"disc does not survive the nudge: {'; '.join(problems)}")
                discs.append(disc)
    logger.debug("%d discs of class %s end at %s", len(discs), target, stop)
    return discs


def disc_sum(discs: Sequence[TropicalDisc], scene: Scene) -> Fraction:
    """Sum of weight / |Aut| over the discs."""
    return sum((disc_weight(d, scene) / disc_automorphism_order(d) for d in discs), Fraction(0))
