# -*- coding: utf-8 -*-
"""
Worked scenes and the self-verifying demos built on them.

pentagon: two I1 singularities, directions (1,0) and (0,1), initial rays
meeting once at the origin. pairing_two: directions (1,0) and (1,2), whose
symplectic pairing is 2.
"""

from fractions import Fraction
from typing import Dict, List, Tuple

from src.wallcross.automorphism import compose, elementary_K
from src.wallcross.engine import (
    Diagram,
    Scene,
    Singularity,
    complete,
    initial_diagram,
    wall_delta,
)
from src.wallcross.geometry import ORIGIN, Point
from src.wallcross.lattice import BoundaryVector, Charge
from src.wallcross.novikov import Truncation
from src.wallcross.tropical import initial_omega_tilde, wall_crossing_sum

GAMMA1 = BoundaryVector(1, 0)
GAMMA2 = BoundaryVector(0, 1)


def pentagon_scene(truncation: Truncation = Truncation.energy(20)) -> Scene:
    return Scene(
        (
            Singularity(Point(-1, 0), GAMMA1, 1),
            Singularity(Point(0, -1), GAMMA2, 1),
        ),
        truncation,
    )


def pairing_two_scene(truncation: Truncation = Truncation.degree(5)) -> Scene:
    return Scene(
        (
            Singularity(Point(-1, 0), BoundaryVector(1, 0), 1),
            Singularity(Point(-1, -2), BoundaryVector(1, 2), 1),
        ),
        truncation,
    )


def single_singularity_scene(multiplicity: int, truncation: Truncation = Truncation.degree(6)) -> Scene:
    return Scene((Singularity(Point(0, 0), GAMMA1, multiplicity),), truncation)


def pentagon_identity_holds(order: int = 8) -> bool:
    """K_{g1} K_{g2} = K_{g2} K_{g1+g2} K_{g1} in degree mode up to the given order."""
    tr = Truncation.degree(order)
    k1 = elementary_K(Charge(GAMMA1, 1), 1, "default", tr)
    k2 = elementary_K(Charge(GAMMA2, 1), 1, "default", tr)
    k12 = elementary_K(Charge(GAMMA1 + GAMMA2, 2), 1, "default", tr)
    return compose([k1, k2], tr) == compose([k2, k12, k1], tr)


def run_demo_pentagon(truncation: Truncation = Truncation.energy(20)) -> Tuple[bool, List[str]]:
    diagram = complete(initial_diagram(pentagon_scene(truncation)))
    new = diagram.inserted_rays()
    lines = [f"{len(new)} new ray" + ("" if len(new) == 1 else "s")]
    ok = len(new) == 1 and new[0].direction == BoundaryVector(1, 1)
    for ray in new:
        terms = ", ".join(f"{t.coeff}·z^{ray.direction.scale(t.l)}·T^{{{t.base}+{t.l}t}}" for t in ray.slab)
        lines.append(f"  from {ray.origin} direction {ray.direction}: {terms}")
    delta = wall_delta(diagram, ORIGIN, GAMMA1 + GAMMA2)
    lines.append(f"ΔΩ(γ1+γ2)={delta.omega}")
    ok = ok and delta.omega == 1
    for gamma in (GAMMA1, GAMMA2, BoundaryVector(1, 2), BoundaryVector(2, 1), BoundaryVector(2, 2)):
        d = wall_delta(diagram, ORIGIN, gamma)
        ok = ok and d.omega == 0
    identity = pentagon_identity_holds()
    lines.append(f"pentagon identity to degree 8: {identity}")
    return ok and identity, lines


TWO_WALL_TARGETS = (BoundaryVector(1, 2), BoundaryVector(2, 2))
TWO_WALL_EXPECTED = {BoundaryVector(1, 2): Fraction(0), BoundaryVector(2, 2): Fraction(-1, 4)}


def two_wall_table(diagram: Diagram) -> Dict[BoundaryVector, Dict[str, object]]:
    incoming = [(GAMMA1, initial_omega_tilde()), (GAMMA2, initial_omega_tilde())]
    table = {}
    for target in TWO_WALL_TARGETS:
        engine_value = wall_delta(diagram, ORIGIN, target).omega_tilde
        tropical = wall_crossing_sum(target, incoming)
        table[target] = {"engine": engine_value, "tropical": tropical}
    return table


def run_demo_two_wall_table(truncation: Truncation = Truncation.energy(20)) -> Tuple[bool, List[str]]:
    diagram = complete(initial_diagram(pentagon_scene(truncation)))
    ok = True
    lines = []
    for target, row in two_wall_table(diagram).items():
        tropical = row["tropical"]
        parts = " + ".join(
            f"{c.ntrop}/{c.aut}·({c.product})" for c in tropical.components
        )
        lines.append(f"ΔΩ̃{target}={row['engine']}  tropical: {parts} = {tropical.total}")
        ok = ok and row["engine"] == tropical.total == TWO_WALL_EXPECTED[target]
    return ok, lines

