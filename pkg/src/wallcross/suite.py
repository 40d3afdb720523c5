#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Randomized consistency suite.
Generates generic scenes, completes them and checks the completed diagrams.

Outputs:
  reports/consistency.csv: one row per scene
  reports/consistency_details.jsonl: scene, diagram summary and any defects
"""

import argparse
import csv
import logging
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List

from tqdm import tqdm

from src.wallcross.config import get_engine_config, get_logging_config
from src.wallcross.engine import (
    Diagram,
    Scene,
    Singularity,
    check_consistency,
    complete,
    initial_diagram,
    invariants_at,
    sample_points,
    wall_product_at,
)
from src.wallcross.errors import GenericityError, IncoherentEnergyError, SceneError
from src.wallcross.geometry import Point
from src.wallcross.lattice import BoundaryVector, is_primitive
from src.wallcross.novikov import Truncation
from src.wallcross.scene_io import scene_to_dict, write_jsonl

logger = logging.getLogger(__name__)


def random_scene(
    rng: random.Random,
    truncation: Truncation,
    max_singularities: int = 4,
    denominator: int = 7,
    entry_bound: int = 2,
    span: int = 3,
) -> Scene:
    n = rng.randint(2, max_singularities)
    directions = [
        BoundaryVector(a, b)
        for a in range(-entry_bound, entry_bound + 1)
        for b in range(-entry_bound, entry_bound + 1)
        if (a, b) != (0, 0) and is_primitive(BoundaryVector(a, b))
    ]
    sings: List[Singularity] = []
    while len(sings) < n:
        q = rng.randint(1, denominator)
        pos = Point(Fraction(rng.randint(-span * q, span * q), q), Fraction(rng.randint(-span * q, span * q), q))
        if any(s.pos == pos for s in sings):
            continue
        sings.append(Singularity(pos, rng.choice(directions), 1))
    return Scene(tuple(sings), truncation)


def generic_random_scene(rng: random.Random, truncation: Truncation, attempts: int = 50, **kwargs) -> Scene:
    for _ in range(attempts):
        scene = random_scene(rng, truncation, **kwargs)
        try:
            scene.validate()
        except GenericityError:
            continue
        return scene
    raise SceneError(f"no generic scene found in {attempts} attempts")


@dataclass
class SceneResult:
    name: str
    singularities: int
    rays: int
    inserted: int
    consistent: bool
    fixed_point: bool
    reality: bool
    seconds: float
    defects: Dict[str, List[str]]


def _reality_holds(diagram: Diagram, mirrored: Diagram) -> bool:
    """
    Wall products at mirrored sample points agree under z^v -> z^{-v}; where the
    energies at a sample point are coherent the invariant tables are compared too.
    """
    tables = 0
    samples = sample_points(diagram)
    for u, d in samples:
        if wall_product_at(diagram, u, d).reflect() != wall_product_at(mirrored, -u, -d):
            return False
        try:
            a = invariants_at(diagram, u, d)
            b = invariants_at(mirrored, -u, -d)
        except IncoherentEnergyError:
            continue
        if a.omega_values != b.omega_values or a.omega_tilde_values != b.omega_tilde_values:
            return False
        tables += 1
    logger.debug(f"Reality: {len(samples)} sample points, {tables} with invariant tables")
    return True


def check_scene(name: str, scene: Scene, max_stages: int = 400, workers: int = 1) -> SceneResult:
    t0 = time.perf_counter()
    diagram = complete(initial_diagram(scene), max_stages=max_stages, workers=workers)
    report = check_consistency(diagram)
    again = complete(diagram, max_stages=max_stages, workers=workers)
    mirrored = complete(initial_diagram(scene.mirrored()), max_stages=max_stages, workers=workers)
    return SceneResult(
        name=name,
        singularities=len(scene.singularities),
        rays=len(diagram.rays),
        inserted=len(diagram.inserted_rays()),
        consistent=not report,
        fixed_point=again.rays == diagram.rays,
        reality=_reality_holds(diagram, mirrored),
        seconds=time.perf_counter() - t0,
        defects={str(p): [t.render() for t in terms] for p, terms in report.items()},
    )


def run_suite(args) -> List[SceneResult]:
    engine_cfg = get_engine_config(args.config)
    truncation = Truncation.degree(int(args.order)) if args.mode == "degree" else Truncation.energy(Fraction(args.order))
    rng = random.Random(args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    details_path = out_dir / "consistency_details.jsonl"
    details_path.write_text("", encoding="utf-8")

    results: List[SceneResult] = []
    for i in tqdm(range(args.scenes), desc="scenes"):
        name = f"random_{i:03d}"
        for _ in range(10):
            scene = generic_random_scene(rng, truncation)
            try:
                res = check_scene(name, scene, engine_cfg["max_stages"], engine_cfg["workers"])
                break
            except GenericityError as e:
                logger.warning(f"{name}: {e}; drawing a new scene")
        else:
            raise SceneError(f"{name}: completion kept hitting singularities")
        results.append(res)
        write_jsonl(details_path, {
            "scene": name,
            "definition": scene_to_dict(scene),
            "rays": res.rays,
            "inserted": res.inserted,
            "consistent": res.consistent,
            "fixed_point": res.fixed_point,
            "reality": res.reality,
            "defects": res.defects,
        })

    csv_path = out_dir / "consistency.csv"
    fieldnames = ["scene", "singularities", "rays", "inserted", "consistent", "fixed_point", "reality", "seconds"]
    with csv_path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames)
        writer.writeheader()
        for r in results:
            writer.writerow({
                "scene": r.name,
                "singularities": r.singularities,
                "rays": r.rays,
                "inserted": r.inserted,
                "consistent": r.consistent,
                "fixed_point": r.fixed_point,
                "reality": r.reality,
                "seconds": f"{r.seconds:.3f}",
            })
    logger.info(f"Saved {csv_path}")
    logger.info(f"Saved {details_path}")
    return results


def add_arguments(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--scenes", type=int, default=25)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--mode", choices=["energy", "degree"], default="degree")
    ap.add_argument("--order", type=str, default="5", help="lambda (energy) or k (degree)")
    ap.add_argument("--out-dir", type=str, default="reports")
    ap.add_argument("--config", type=str, default="config.yaml")


def summarize(results: List[SceneResult]) -> bool:
    bad = [r for r in results if not (r.consistent and r.fixed_point and r.reality)]
    for r in bad:
        print(f"[FAIL] {r.name}: consistent={r.consistent} fixed_point={r.fixed_point} reality={r.reality}")
    if not bad:
        print(f"[OK] {len(results)} scenes consistent, fixed points, reality holds")
    return not bad


def main():
    ap = argparse.ArgumentParser(description="Randomized consistency suite")
    add_arguments(ap)
    args = ap.parse_args()
    logging.basicConfig(level=get_logging_config(args.config)["level"],
                        format="%(asctime)s - %(levelname)s - %(message)s")
    ok = summarize(run_suite(args))
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
