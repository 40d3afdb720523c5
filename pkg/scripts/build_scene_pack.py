#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Write a reproducible pack of random generic scenes to data/scenes/.

Output:
  data/scenes/scene_XXX.json   one scene per file
  data/scenes/index.csv        scene, singularities, mode

Scenes are drawn with the same generator as the consistency suite, so a
seed reproduces the suite's inputs.
"""

from __future__ import annotations

import argparse
import csv
import random
from fractions import Fraction
from pathlib import Path

from src.wallcross.novikov import Truncation
from src.wallcross.scene_io import scene_to_dict, write_json
from src.wallcross.suite import generic_random_scene


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", type=str, default="data/scenes")
    ap.add_argument("--count", type=int, default=25)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--mode", choices=["energy", "degree"], default="degree")
    ap.add_argument("--order", type=str, default="5")
    ap.add_argument("--max-singularities", type=int, default=4)
    ap.add_argument("--denominator", type=int, default=7)
    args = ap.parse_args()

    truncation = Truncation.degree(int(args.order)) if args.mode == "degree" else Truncation.energy(Fraction(args.order))
    rng = random.Random(args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    for i in range(args.count):
        scene = generic_random_scene(
            rng, truncation, max_singularities=args.max_singularities, denominator=args.denominator
        )
        path = out_dir / f"scene_{i:03d}.json"
        write_json(path, scene_to_dict(scene))
        rows.append({"scene": path.name, "singularities": len(scene.singularities), "mode": str(truncation)})

    index_path = out_dir / "index.csv"
    with index_path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=["scene", "singularities", "mode"])
        writer.writeheader()
        writer.writerows(rows)

    print(f"[OK] wrote {len(rows)} scenes to {out_dir}")
    print(f"[OK] index: {index_path}")


if __name__ == "__main__":
    main()
