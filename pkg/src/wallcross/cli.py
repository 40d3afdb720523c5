#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Command-line front end for the scattering engine and the tropical oracle.

  scatter         complete a scene and write the diagram JSON
  check           print the consistency report (exit 1 on defects)
  invariants      Omega / Omega~ table at a point and direction
  wallcross       jump of Omega / Omega~ of a class across a collision point
  tropical-count  N^trop counts and the tropical wall-crossing sum
  render          SVG of a diagram (or of a disc over its scene)
  demo-pentagon   pentagon scene, self-verifying
  demo-example65  two-wall Omega~ table against the tropical sum, self-verifying
  suite           randomized consistency suite
"""

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional, TypeVar

from src.wallcross import suite
from src.wallcross.automorphism import render_k_factors
from src.wallcross.config import get_engine_config, get_logging_config, get_render_config, get_tropical_config
from src.wallcross.demos import run_demo_pentagon, run_demo_two_wall_table
from src.wallcross.engine import (
    Diagram,
    check_consistency,
    collision_points,
    complete,
    initial_diagram,
    invariants_at,
    wall_delta,
)
from src.wallcross.errors import BeyondCutoffError, WallCrossError
from src.wallcross.geometry import Point
from src.wallcross.lattice import BoundaryVector
from src.wallcross.novikov import Truncation
from src.wallcross.render import LayoutConfig, diagram_svg, disc_svg
from src.wallcross.scene_io import diagram_to_dict, load_diagram, load_disc, load_scene, write_json
from src.wallcross.tropical import initial_omega_tilde, wall_crossing_sum

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _point_arg(text: str) -> Point:
    try:
        return Point.parse(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected 'x,y' with rational entries, got {text!r}")


def _vector_arg(text: str) -> BoundaryVector:
    try:
        return BoundaryVector.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b' with integer entries, got {text!r}")


def _order_arg(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a positive rational, got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive rational, got {text!r}")
    return value


def _truncation(args, default: Truncation) -> Truncation:
    mode = args.mode or default.mode.value
    order = args.order if args.order is not None else default.cutoff
    if mode == "degree":
        if order.denominator != 1:
            raise WallCrossError(f"--order must be an integer in degree mode, got {order}")
        return Truncation.degree(int(order))
    return Truncation.energy(order)


def _from_flag(flag: str, load: Callable[[Path], T], path: str) -> T:
    try:
        return load(Path(path))
    except WallCrossError as e:
        raise type(e)(f"{flag} {e}") from e


def _load_diagram(args, need_completion: bool = True) -> Diagram:
    """Diagram from --diagram, or from --scene (completed unless told otherwise)."""
    if getattr(args, "diagram", None):
        loaded = _from_flag("--diagram", load_diagram, args.diagram)
        tr = _truncation(args, loaded.truncation)
        diagram = Diagram(loaded.scene.with_truncation(tr), loaded.rays, loaded.completed_to)
        if not need_completion or loaded.completed_to == tr:
            return diagram
    else:
        if not args.scene:
            raise WallCrossError("--scene or --diagram is required")
        scene = _from_flag("--scene", load_scene, args.scene)
        diagram = initial_diagram(scene.with_truncation(_truncation(args, scene.truncation)))
        if not need_completion:
            return diagram
    engine_cfg = get_engine_config(args.config)
    return complete(diagram, max_stages=engine_cfg["max_stages"], workers=engine_cfg["workers"])


# --- commands ---

def cmd_scatter(args) -> int:
    diagram = _load_diagram(args)
    out = Path(args.out or "artifacts/diagram.json")
    write_json(out, diagram_to_dict(diagram))
    print(f"[OK] {len(diagram.rays)} rays ({len(diagram.inserted_rays())} inserted) -> {out}")
    if args.svg:
        _write_svg(Path(args.svg), diagram_svg(diagram, _layout(args)))
    return 0


def cmd_check(args) -> int:
    diagram = _load_diagram(args, need_completion=args.complete)
    report = check_consistency(diagram)
    if not report:
        print(f"[OK] consistent modulo {diagram.truncation}")
        return 0
    for p, terms in report.items():
        classes = ", ".join(str(t.boundary) for t in terms)
        print(f"[FAIL] defect at {p}: classes {classes}")
        for t in terms:
            print(f"    {t.render()}")
    return 1


def cmd_invariants(args) -> int:
    diagram = _load_diagram(args)
    try:
        table = invariants_at(diagram, args.at, args.direction, order=args.max_l)
    except BeyondCutoffError as e:
        raise BeyondCutoffError(f"--max-l {args.max_l}: {e}") from e
    print(table.render())
    print(f"K factors: {render_k_factors(table.k_factors())}")
    return 0


def cmd_wallcross(args) -> int:
    diagram = _load_diagram(args)
    points = [c.point for c in collision_points(diagram)]
    if args.at not in points:
        logger.warning("%s is not a collision point of the diagram", args.at)
    try:
        delta = wall_delta(diagram, args.at, getattr(args, "class"))
    except BeyondCutoffError as e:
        raise BeyondCutoffError(f"--class {getattr(args, 'class')}: {e}") from e
    print(f"ΔΩ{delta.boundary}={delta.omega}")
    print(f"ΔΩ̃{delta.boundary}={delta.omega_tilde}")
    return 0


def cmd_tropical_count(args) -> int:
    trop_cfg = get_tropical_config(args.config)
    incoming: List[BoundaryVector] = list(args.incoming or [])
    if not incoming:
        if not args.scene:
            raise WallCrossError("--incoming or --scene is required")
        incoming = [s.direction for s in _from_flag("--scene", load_scene, args.scene).singularities]
    result = wall_crossing_sum(
        getattr(args, "class"),
        [(g, initial_omega_tilde()) for g in incoming],
        max_total_weight=trop_cfg["max_total_weight"],
        seed=trop_cfg["position_seed"],
        denominator=trop_cfg["position_denominator"],
    )
    for c in result.components:
        weights = " ".join(f"{g}:{list(w)}" for g, w in zip(incoming, c.weights))
        print(f"  {weights}  N^trop={c.ntrop} Aut={c.aut} prod={c.product} -> {c.value}")
    print(f"ΔΩ̃{result.target}={result.total}")
    return 0


def _layout(args) -> LayoutConfig:
    cfg = get_render_config(args.config)
    return LayoutConfig(scale=int(cfg["scale"]), margin=int(cfg["margin"]))


def _write_svg(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    print(f"[OK] wrote {path}")


def cmd_render(args) -> int:
    if not args.svg:
        raise WallCrossError("--svg is required")
    if args.disc:
        if not args.scene:
            raise WallCrossError("--scene is required to render a disc")
        disc = _from_flag("--disc", load_disc, args.disc)
        scene = _from_flag("--scene", load_scene, args.scene)
        _write_svg(Path(args.svg), disc_svg(disc, scene, _layout(args)))
        return 0
    diagram = _load_diagram(args, need_completion=not args.no_complete)
    _write_svg(Path(args.svg), diagram_svg(diagram, _layout(args)))
    return 0


def _print_demo(ok: bool, lines: List[str]) -> int:
    for line in lines:
        print(line)
    print("[OK] demo verified" if ok else "[FAIL] demo mismatch")
    return 0 if ok else 1


def cmd_demo_pentagon(args) -> int:
    return _print_demo(*run_demo_pentagon())


def cmd_demo_two_wall(args) -> int:
    return _print_demo(*run_demo_two_wall_table())


def cmd_suite(args) -> int:
    return 0 if suite.summarize(suite.run_suite(args)) else 1


# --- parser ---

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wallcross", description="Scattering diagrams and tropical counts")
    sub = ap.add_subparsers(dest="command", required=True)

    def scene_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scene", type=str, help="scene JSON")
        p.add_argument("--diagram", type=str, help="diagram JSON written by scatter")
        p.add_argument("--mode", choices=["energy", "degree"], help="override the scene filtration")
        p.add_argument("--order", type=_order_arg, help="lambda (energy) or k (degree)")
        p.add_argument("--config", type=str, default="config.yaml")

    p = sub.add_parser("scatter", help="complete a scene and write the diagram")
    scene_flags(p)
    p.add_argument("--out", type=str)
    p.add_argument("--svg", type=str)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("check", help="consistency report")
    scene_flags(p)
    p.add_argument("--complete", action="store_true", help="complete before checking")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("invariants", help="Omega / Omega~ at a point")
    scene_flags(p)
    p.add_argument("--at", type=_point_arg, required=True)
    p.add_argument("--direction", type=_vector_arg, required=True)
    p.add_argument("--max-l", type=int, default=None)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("wallcross", help="jump across a collision point")
    scene_flags(p)
    p.add_argument("--at", type=_point_arg, required=True)
    p.add_argument("--class", type=_vector_arg, required=True)
    p.set_defaults(func=cmd_wallcross)

    p = sub.add_parser("tropical-count", help="tropical wall-crossing sum")
    p.add_argument("--scene", type=str)
    p.add_argument("--incoming", type=_vector_arg, action="append", help="incoming primitive class, repeatable")
    p.add_argument("--class", type=_vector_arg, required=True)
    p.add_argument("--config", type=str, default="config.yaml")
    p.set_defaults(func=cmd_tropical_count)

    p = sub.add_parser("render", help="SVG figure")
    scene_flags(p)
    p.add_argument("--svg", type=str)
    p.add_argument("--disc", type=str, help="disc JSON drawn over --scene")
    p.add_argument("--no-complete", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("demo-pentagon")
    p.add_argument("--config", type=str, default="config.yaml")
    p.set_defaults(func=cmd_demo_pentagon)

    p = sub.add_parser("demo-example65")
    p.add_argument("--config", type=str, default="config.yaml")
    p.set_defaults(func=cmd_demo_two_wall)

    p = sub.add_parser("suite", help="randomized consistency suite")
    suite.add_arguments(p)
    p.set_defaults(func=cmd_suite)
    return ap


def run(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=get_logging_config(args.config)["level"],
                        format="%(asctime)s - %(levelname)s - %(message)s")
    try:
        return args.func(args)
    except WallCrossError as e:
        print(f"[FAIL] {e}")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
