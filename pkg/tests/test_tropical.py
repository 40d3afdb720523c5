from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Tuple

import pytest

from src.wallcross.demos import pentagon_scene
from src.wallcross.engine import Diagram, Scene, evaluate_slab, invariants_at
from src.wallcross.errors import DegeneratePositionError, NonPrimitiveError, NonTrivalentVertexError, WallCrossError
from src.wallcross.geometry import ORIGIN, Point
from src.wallcross.lattice import BoundaryVector
from src.wallcross.novikov import Truncation
from src.wallcross.tropical import (
    DiscEdge,
    IncomingFamily,
    TropicalDisc,
    count_ntrop,
    disc_automorphism_order,
    disc_energy,
    disc_multiplicity,
    disc_sum,
    disc_weight,
    enumerate_discs,
    enumerate_Ntrop,
    initial_omega_tilde,
    multiple_cover_weight,
    validate,
    vertex_multiplicity,
    wall_crossing_sum,
)

V = BoundaryVector
A, B = V(1, 0), V(0, 1)
STOP = Point(1, 1)


@pytest.fixture
def scene() -> Scene:
    return pentagon_scene(Truncation.energy(20))


def _primitive(v: BoundaryVector) -> Tuple[int, BoundaryVector]:
    g = math.gcd(abs(v.a), abs(v.b))
    return g, V(v.a // g, v.b // g)


def caterpillar(leaves: List[Tuple[int, int, BoundaryVector]]) -> TropicalDisc:
    """Leaves (singularity, weight, direction) joined one after another at the origin, ending at (1,1)."""
    vertices = {f"leaf{i}": k for i, (k, _, _) in enumerate(leaves)}
    vertices["stop"] = STOP
    edges = []
    velocity = V(0, 0)
    prev = None
    for i, (_, w, d) in enumerate(leaves):
        if i == 0:
            velocity = d.scale(w)
            prev = "leaf0"
            continue
        vid = f"v{i}"
        vertices[vid] = ORIGIN
        if prev.startswith("leaf"):
            edges.append(DiscEdge(prev, vid, leaves[0][1], leaves[0][2]))
        else:
            g, prim = _primitive(velocity)
            edges.append(DiscEdge(prev, vid, g, prim))
        edges.append(DiscEdge(f"leaf{i}", vid, w, d))
        velocity = velocity + d.scale(w)
        prev = vid
    g, prim = _primitive(velocity)
    edges.append(DiscEdge(prev, "stop", g, prim))
    return TropicalDisc(vertices, tuple(edges), "stop")


def test_simple_disc(scene: Scene) -> None:
    disc = caterpillar([(0, 1, A), (1, 1, B)])
    assert validate(disc, scene) == []
    assert disc.boundary_class() == V(1, 1)
    assert disc_multiplicity(disc) == 1
    assert disc_weight(disc, scene) == 1
    assert disc_automorphism_order(disc) == 1
    assert disc_energy(disc, scene) == 3


def test_disc_energy_matches_slab_exponent(scene: Scene, pentagon_completed) -> None:
    disc = caterpillar([(0, 1, A), (1, 1, B)])
    new = pentagon_completed.inserted_rays()[0]
    f = evaluate_slab(new, STOP, pentagon_completed.truncation)
    assert f.coefficient(V(1, 1), disc_energy(disc, scene)) == 1


def test_initial_disc() -> None:
    scene = Scene(pentagon_scene().singularities[:1], Truncation.degree(4))
    disc = TropicalDisc({"a": 0, "stop": Point(1, 0)}, (DiscEdge("a", "stop", 2, A),), "stop")
    assert validate(disc, scene) == []
    assert disc_multiplicity(disc) == 1
    assert disc_weight(disc, scene) == Fraction(-1, 4)
    assert disc_energy(disc, scene) == 4


def test_validate_reports_violations(scene: Scene) -> None:
    off = TropicalDisc(
        {"a": Point(5, 5), "b": 1, "v": ORIGIN, "stop": STOP},
        (DiscEdge("a", "v", 1, A), DiscEdge("b", "v", 1, B), DiscEdge("v", "stop", 1, V(1, 1))),
        "stop",
    )
    problems = validate(off, scene)
    assert any("not a singularity" in p for p in problems)
    assert any("not along" in p for p in problems)

    unbalanced = TropicalDisc(
        {"a": 0, "b": 1, "v": ORIGIN, "stop": Point(2, 1)},
        (DiscEdge("a", "v", 1, A), DiscEdge("b", "v", 1, B), DiscEdge("v", "stop", 1, V(2, 1))),
        "stop",
    )
    assert any("not balanced" in p for p in validate(unbalanced, scene))

    wrong_line = TropicalDisc(
        {"a": 0, "stop": Point(-1, 3)},
        (DiscEdge("a", "stop", 1, B),),
        "stop",
    )
    assert any("invariant line" in p for p in validate(wrong_line, scene))


def test_vertex_multiplicity() -> None:
    assert vertex_multiplicity(1, A, 2, B) == 2
    assert vertex_multiplicity(3, A, 1, V(-1, 0)) == 0
    assert vertex_multiplicity(2, A, 2, B) == 4
    for (w1, m1), (w2, m2) in [((1, V(1, 2)), (3, V(2, -1))), ((2, V(-1, 1)), (1, V(0, -1)))]:
        out = m1.scale(w1) + m2.scale(w2)
        g, prim = _primitive(out)
        assert vertex_multiplicity(w1, m1, w2, m2) == vertex_multiplicity(w2, m2, w1, m1)
        assert vertex_multiplicity(w1, m1, w2, m2) == vertex_multiplicity(w1, m1, g, prim)


def test_non_trivalent_vertex() -> None:
    disc = TropicalDisc(
        {"a": 0, "b": 1, "c": 0, "v": ORIGIN, "stop": Point(2, 1)},
        (
            DiscEdge("a", "v", 1, A),
            DiscEdge("c", "v", 1, A),
            DiscEdge("b", "v", 1, B),
            DiscEdge("v", "stop", 1, V(2, 1)),
        ),
        "stop",
    )
    with pytest.raises(NonTrivalentVertexError):
        disc_multiplicity(disc)


def test_multiple_cover_weight() -> None:
    assert [multiple_cover_weight(d) for d in (1, 2, 3)] == [1, Fraction(-1, 4), Fraction(1, 9)]
    assert multiple_cover_weight(2, 3) == Fraction(-3, 4)


@pytest.mark.parametrize(
    "families, expected",
    [
        ([IncomingFamily(A, (1,)), IncomingFamily(B, (1,))], 1),
        ([IncomingFamily(A, (1,)), IncomingFamily(V(1, 2), (1,))], 2),
        ([IncomingFamily(A, (2,)), IncomingFamily(B, (2,))], 4),
        ([IncomingFamily(A, (2,)), IncomingFamily(B, (1, 1))], 4),
        ([IncomingFamily(A, (1, 1)), IncomingFamily(B, (2,))], 4),
        ([IncomingFamily(A, (1, 1)), IncomingFamily(B, (1, 1))], 2),
        ([IncomingFamily(A, (1,)), IncomingFamily(B, (1, 1))], 1),
        ([IncomingFamily(A, (1, 1))], 0),
        ([IncomingFamily(A, (3,))], 0),
    ],
)
def test_enumerate_ntrop(families, expected: int) -> None:
    assert enumerate_Ntrop(families) == expected


def test_ntrop_does_not_depend_on_positions() -> None:
    families = [IncomingFamily(A, (1, 1)), IncomingFamily(B, (1, 1))]
    assert {count_ntrop(families, seed=s) for s in range(1, 6)} == {2}
    mixed = [IncomingFamily(A, (1,)), IncomingFamily(V(1, 2), (1, 1))]
    assert len({count_ntrop(mixed, seed=s) for s in range(1, 6)}) == 1


def test_ntrop_input_checks() -> None:
    with pytest.raises(NonPrimitiveError):
        enumerate_Ntrop([IncomingFamily(V(2, 0), (1,)), IncomingFamily(B, (1,))])
    with pytest.raises(WallCrossError, match="exceeds bound"):
        enumerate_Ntrop([IncomingFamily(A, (4,)), IncomingFamily(B, (3,))])
    with pytest.raises(DegeneratePositionError):
        enumerate_Ntrop([IncomingFamily(A, (1, 1))], anchors=[Point(0, 0), Point(3, 0)])


def test_wall_crossing_sum_pentagon() -> None:
    incoming = [(A, initial_omega_tilde()), (B, initial_omega_tilde())]
    assert wall_crossing_sum(V(1, 1), incoming).total == 1

    s12 = wall_crossing_sum(V(1, 2), incoming)
    assert sorted(s12.values()) == [Fraction(-1, 2), Fraction(1, 2)]
    assert sorted(c.ntrop for c in s12.components) == [1, 2]
    assert s12.total == 0

    s22 = wall_crossing_sum(V(2, 2), incoming)
    assert sorted(s22.values()) == sorted([Fraction(1, 4), Fraction(-1, 2), Fraction(-1, 2), Fraction(1, 2)])
    assert sorted(c.ntrop for c in s22.components) == [2, 4, 4, 4]
    assert s22.total == Fraction(-1, 4)


def test_wall_crossing_sum_rejects_non_primitive() -> None:
    with pytest.raises(NonPrimitiveError):
        wall_crossing_sum(V(2, 2), [(V(2, 0), initial_omega_tilde()), (B, initial_omega_tilde())])


def test_disc_sum_matches_wall_crossing_sum(scene: Scene) -> None:
    discs = [
        caterpillar([(0, 2, A), (1, 2, B)]),
        caterpillar([(0, 2, A), (1, 1, B), (1, 1, B)]),
        caterpillar([(0, 1, A), (1, 2, B), (0, 1, A)]),
        caterpillar([(0, 1, A), (1, 1, B), (0, 1, A), (1, 1, B)]),
    ]
    for disc in discs:
        assert validate(disc, scene) == []
        assert disc.boundary_class() == V(2, 2)
        assert disc_energy(disc, scene) == 6
    assert [disc_multiplicity(d) for d in discs] == [4, 4, 4, 2]
    assert [disc_automorphism_order(d) for d in discs] == [1, 2, 2, 4]
    total = sum((disc_weight(d, scene) / disc_automorphism_order(d) for d in discs), Fraction(0))
    incoming = [(A, initial_omega_tilde()), (B, initial_omega_tilde())]
    assert total == wall_crossing_sum(V(2, 2), incoming).total == Fraction(-1, 4)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_enumerated_discs_match_engine_on_inserted_ray(pentagon_completed: Diagram, l: int) -> None:
    scene = pentagon_completed.scene
    u = Point(Fraction(1, 2), Fraction(1, 2))
    discs = enumerate_discs(scene, u, V(l, l), max_total_weight=2 * l)
    assert discs
    for disc in discs:
        assert validate(disc, scene) == []
        assert disc.boundary_class() == V(l, l)
        assert disc.vertices[disc.incoming("stop")[0].src] == ORIGIN
    engine = invariants_at(pentagon_completed, u, V(1, 1)).omega_tilde(l)
    assert disc_sum(discs, scene) == engine
    assert engine == Fraction((-1) ** (l - 1), l * l)


def test_enumerated_discs_for_two_one_class(pentagon_completed: Diagram) -> None:
    scene = pentagon_completed.scene
    u = Point(Fraction(1, 2), 1)
    discs = enumerate_discs(scene, u, V(1, 2), max_total_weight=3)
    assert sorted(disc_multiplicity(d) for d in discs) == [1, 2]
    assert disc_sum(discs, scene) == 0
    assert invariants_at(pentagon_completed, u, V(1, 2)).is_zero()


def test_enumerated_discs_on_initial_ray() -> None:
    scene = Scene(pentagon_scene().singularities[:1], Truncation.degree(4))
    discs = enumerate_discs(scene, Point(1, 0), V(2, 0), max_total_weight=2)
    assert len(discs) == 1
    assert disc_sum(discs, scene) == Fraction(-1, 4)
    with pytest.raises(DegeneratePositionError):
        enumerate_discs(scene, Point(-1, 0), V(1, 0))
