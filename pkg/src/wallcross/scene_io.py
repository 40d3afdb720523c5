# -*- coding: utf-8 -*-
"""
JSON interchange for scenes, diagrams and tropical discs.

Rationals travel as strings "p/q" (or "p"), integer vectors as [a, b].
Output is deterministic: fixed key order, indent=2, trailing newline.
Every malformed field is reported as a SceneError naming the file and field.
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, TypeVar

from src.wallcross.engine import Diagram, Ray, Scene, Singularity, SlabTerm
from src.wallcross.errors import SceneError
from src.wallcross.geometry import Box, Point
from src.wallcross.lattice import BoundaryVector
from src.wallcross.novikov import FiltrationMode, Truncation
from src.wallcross.tropical import DiscEdge, TropicalDisc

T = TypeVar("T")


def _q(x: Fraction) -> str:
    return str(Fraction(x))


def _parse_q(value: Any, what: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SceneError(f"{what}: rationals must be strings 'p/q' or integers, got {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SceneError(f"{what}: cannot parse rational {value!r}")


def _int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SceneError(f"{what}: expected an integer, got {value!r}")
    try:
        return int(value)
    except ValueError:
        raise SceneError(f"{what}: expected an integer, got {value!r}")


def _field(d: Any, key: str, what: str) -> Any:
    if not isinstance(d, dict):
        raise SceneError(f"{what}: expected an object, got {d!r}")
    if key not in d:
        raise SceneError(f"{what}: missing '{key}'")
    return d[key]


def _vec(value: Any, what: str) -> BoundaryVector:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise SceneError(f"{what}: expected [a, b], got {value!r}")
    return BoundaryVector(_int(value[0], what), _int(value[1], what))


def _point(value: Any, what: str) -> Point:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise SceneError(f"{what}: expected [x, y], got {value!r}")
    return Point(_parse_q(value[0], what), _parse_q(value[1], what))


# --- scenes ---

def truncation_from_dict(d: Dict[str, Any]) -> Truncation:
    if not isinstance(d, dict) or len(d) != 1 or next(iter(d)) not in ("energy", "degree"):
        raise SceneError(f"mode must be {{'energy': lambda}} or {{'degree': k}}, got {d!r}")
    if "energy" in d:
        return Truncation.energy(_parse_q(d["energy"], "mode.energy"))
    return Truncation.degree(_int(d["degree"], "mode.degree"))


def truncation_to_dict(tr: Truncation) -> Dict[str, Any]:
    if tr.mode is FiltrationMode.ENERGY:
        return {"energy": _q(tr.cutoff)}
    return {"degree": int(tr.cutoff)}


def scene_from_dict(d: Dict[str, Any]) -> Scene:
    if not isinstance(d, dict) or "mode" not in d:
        raise SceneError("scene needs a 'mode' entry")
    sings = []
    for k, s in enumerate(d.get("singularities", [])):
        what = f"singularities[{k}]"
        sings.append(Singularity(
            _point(_field(s, "pos", what), f"{what}.pos"),
            _vec(_field(s, "direction", what), f"{what}.direction"),
            _int(s.get("multiplicity", 1), f"{what}.multiplicity"),
        ))
    viewport = None
    if "viewport" in d:
        v = [_parse_q(x, "viewport") for x in d["viewport"]]
        if len(v) != 4:
            raise SceneError(f"viewport: expected [xmin, ymin, xmax, ymax], got {d['viewport']!r}")
        viewport = Box(*v)
    scene = Scene(
        tuple(sings),
        truncation_from_dict(d["mode"]),
        _int(d.get("epsilon", 1), "epsilon"),
        str(d.get("sigma", "default")),
        viewport,
    )
    scene.validate()
    return scene


def scene_to_dict(scene: Scene) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "mode": truncation_to_dict(scene.truncation),
        "epsilon": scene.epsilon,
        "sigma": scene.sigma,
        "singularities": [
            {"pos": list(s.pos.as_strings()), "direction": list(s.direction.as_tuple()), "multiplicity": s.multiplicity}
            for s in scene.singularities
        ],
    }
    if scene.viewport is not None:
        v = scene.viewport
        out["viewport"] = [_q(v.xmin), _q(v.ymin), _q(v.xmax), _q(v.ymax)]
    return out


def _read_json(path: Path) -> Any:
    try:
        with Path(path).open("r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise SceneError(f"{path}: cannot read file ({e.strerror or e})")
    except json.JSONDecodeError as e:
        raise SceneError(f"{path}: invalid JSON ({e})")


def _load(path: Path, parse: Callable[[Any], T]) -> T:
    data = _read_json(path)
    try:
        return parse(data)
    except SceneError as e:
        raise type(e)(f"{path}: {e}") from e


def load_scene(path: Path) -> Scene:
    return _load(path, scene_from_dict)


# --- diagrams ---

def ray_to_dict(ray: Ray) -> Dict[str, Any]:
    return {
        "origin": list(ray.origin.as_strings()),
        "direction": list(ray.direction.as_tuple()),
        "slab": [{"coeff": _q(t.coeff), "l": t.l, "base": _q(t.base)} for t in ray.slab],
        "generation": ray.generation,
        "parents": list(ray.parents),
    }


def ray_from_dict(d: Dict[str, Any], k: int) -> Ray:
    what = f"rays[{k}]"
    slab = []
    for t in _field(d, "slab", what):
        slab.append(SlabTerm(
            _int(_field(t, "l", f"{what}.slab"), f"{what}.slab.l"),
            _parse_q(_field(t, "base", f"{what}.slab"), f"{what}.slab.base"),
            _parse_q(_field(t, "coeff", f"{what}.slab"), f"{what}.slab.coeff"),
        ))
    return Ray(
        _point(_field(d, "origin", what), f"{what}.origin"),
        _vec(_field(d, "direction", what), f"{what}.direction"),
        tuple(slab),
        _int(d.get("generation", 0), f"{what}.generation"),
        tuple(_int(i, f"{what}.parents") for i in d.get("parents", [])),
    )


def diagram_to_dict(diagram: Diagram) -> Dict[str, Any]:
    out: Dict[str, Any] = {"scene": scene_to_dict(diagram.scene)}
    if diagram.completed_to is not None:
        out["completed_to"] = truncation_to_dict(diagram.completed_to)
    out["rays"] = [ray_to_dict(r) for r in diagram.rays]
    return out


def diagram_from_dict(d: Dict[str, Any]) -> Diagram:
    scene = scene_from_dict(_field(d, "scene", "diagram"))
    completed = truncation_from_dict(d["completed_to"]) if "completed_to" in d else None
    rays = tuple(ray_from_dict(r, k) for k, r in enumerate(d.get("rays", [])))
    return Diagram(scene, rays, completed)


def load_diagram(path: Path) -> Diagram:
    return _load(path, diagram_from_dict)


# --- discs ---

def disc_to_dict(disc: TropicalDisc) -> Dict[str, Any]:
    vertices = []
    for vid in sorted(disc.vertices):
        pos = disc.vertices[vid]
        vertices.append({"id": vid, "pos": f"sing:{pos}" if isinstance(pos, int) else list(pos.as_strings())})
    return {
        "vertices": vertices,
        "edges": [
            {"from": e.src, "to": e.dst, "weight": e.weight, "direction": list(e.direction.as_tuple())}
            for e in disc.edges
        ],
        "root": disc.root,
    }


def disc_from_dict(d: Dict[str, Any]) -> TropicalDisc:
    vertices = {}
    for k, v in enumerate(_field(d, "vertices", "disc")):
        vid = str(_field(v, "id", f"vertices[{k}]"))
        pos = _field(v, "pos", f"vertices[{k}]")
        if isinstance(pos, str) and pos.startswith("sing:"):
            vertices[vid] = _int(pos[len("sing:"):], f"vertex {vid}")
        else:
            vertices[vid] = _point(pos, f"vertex {vid}")
    edges = []
    for k, e in enumerate(_field(d, "edges", "disc")):
        what = f"edges[{k}]"
        edges.append(DiscEdge(
            str(_field(e, "from", what)),
            str(_field(e, "to", what)),
            _int(_field(e, "weight", what), f"{what}.weight"),
            _vec(_field(e, "direction", what), f"{what}.direction"),
        ))
    return TropicalDisc(vertices, tuple(edges), str(_field(d, "root", "disc")))


def load_disc(path: Path) -> TropicalDisc:
    return _load(path, disc_from_dict)


# --- files ---

def dumps(obj: Dict[str, Any]) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def write_json(path: Path, obj: Dict[str, Any]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj), encoding="utf-8")


def write_jsonl(path: Path, obj: Dict[str, Any]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as f:
        f.write(json.dumps(obj, ensure_ascii=False) + "\n")


def read_jsonl(path: Path) -> Iterator[Dict[str, Any]]:
    with path.open("r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                yield json.loads(line)


def list_scene_files(root: Path) -> List[Path]:
    return sorted(Path(root).glob("*.json"))
