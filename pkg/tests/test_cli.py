from __future__ import annotations

import json
from pathlib import Path

import pytest

from src.wallcross.cli import run

SCENES = Path(__file__).resolve().parent.parent / "scenes"
PENTAGON = str(SCENES / "pentagon.json")
PENTAGON_DEGREE = str(SCENES / "pentagon_degree.json")
PAIRING_TWO = str(SCENES / "pairing_two.json")


def test_demo_pentagon(capsys) -> None:
    assert run(["demo-pentagon"]) == 0
    out = capsys.readouterr().out
    assert "1 new ray" in out
    assert "ΔΩ(γ1+γ2)=1" in out
    assert "[OK] demo verified" in out


def test_demo_two_wall_table(capsys) -> None:
    assert run(["demo-example65"]) == 0
    out = capsys.readouterr().out
    assert "ΔΩ̃(1,2)=0" in out
    assert "ΔΩ̃(2,2)=-1/4" in out


def test_check_reports_defect_before_completion(capsys) -> None:
    assert run(["check", "--scene", PENTAGON]) == 1
    out = capsys.readouterr().out
    assert "[FAIL] defect at (0,0): classes (1,1)" in out


def test_check_after_completion(capsys) -> None:
    assert run(["check", "--scene", PENTAGON, "--complete"]) == 0
    assert "[OK] consistent" in capsys.readouterr().out


def test_bad_point_argument_names_the_flag(capsys) -> None:
    with pytest.raises(SystemExit) as exc:
        run(["invariants", "--scene", PENTAGON, "--at", "one,two", "--direction", "1,1"])
    assert exc.value.code == 2
    assert "--at" in capsys.readouterr().err


def test_missing_scene_fails_cleanly(capsys) -> None:
    assert run(["check"]) == 2
    assert "[FAIL] --scene or --diagram is required" in capsys.readouterr().out


def test_scatter_is_deterministic(tmp_path: Path, capsys) -> None:
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["scatter", "--scene", PENTAGON_DEGREE, "--out", str(first)]) == 0
    assert run(["scatter", "--scene", PENTAGON_DEGREE, "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert "5 rays (1 inserted)" in capsys.readouterr().out


def test_scatter_then_check_and_render(tmp_path: Path) -> None:
    diagram = tmp_path / "diagram.json"
    svg = tmp_path / "fig" / "diagram.svg"
    assert run(["scatter", "--scene", PENTAGON, "--out", str(diagram)]) == 0
    assert run(["check", "--diagram", str(diagram)]) == 0
    assert run(["render", "--diagram", str(diagram), "--svg", str(svg)]) == 0
    text = svg.read_text(encoding="utf-8")
    assert "<svg" in text
    assert text.rstrip().endswith("</svg>")


def test_render_disc(tmp_path: Path) -> None:
    svg = tmp_path / "disc.svg"
    assert run(["render", "--scene", PENTAGON, "--disc", str(SCENES / "pentagon_disc.json"), "--svg", str(svg)]) == 0
    assert "<svg" in svg.read_text(encoding="utf-8")


def test_order_override(tmp_path: Path, capsys) -> None:
    out = tmp_path / "d.json"
    assert run(["scatter", "--scene", PENTAGON, "--mode", "degree", "--order", "1", "--out", str(out)]) == 0
    # pairs of initial rays are already past the cutoff
    assert "4 rays (0 inserted)" in capsys.readouterr().out


def test_invariants_command(capsys) -> None:
    assert run(["invariants", "--scene", PENTAGON_DEGREE, "--at", "1/2,1/2", "--direction", "1,1"]) == 0
    out = capsys.readouterr().out
    assert "1\t1\t1" in out
    assert "2\t0\t-1/4" in out
    assert "K factors: K[(1,1),E=2]^1" in out


def test_wallcross_command(capsys) -> None:
    assert run(["wallcross", "--scene", PENTAGON_DEGREE, "--at", "0,0", "--class", "2,2"]) == 0
    out = capsys.readouterr().out
    assert "ΔΩ(2,2)=0" in out
    assert "ΔΩ̃(2,2)=-1/4" in out


def test_tropical_count_command(capsys) -> None:
    assert run(["tropical-count", "--incoming", "1,0", "--incoming", "0,1", "--class", "2,2"]) == 0
    assert "ΔΩ̃(2,2)=-1/4" in capsys.readouterr().out
    assert run(["tropical-count", "--scene", PENTAGON, "--class", "1,1"]) == 0
    assert "ΔΩ̃(1,1)=1" in capsys.readouterr().out


def test_suite_command(tmp_path: Path, capsys) -> None:
    code = run(["suite", "--scenes", "2", "--order", "3", "--out-dir", str(tmp_path)])
    assert code == 0
    assert "[OK] 2 scenes consistent" in capsys.readouterr().out
    rows = (tmp_path / "consistency.csv").read_text(encoding="utf-8").splitlines()
    assert rows[0].startswith("scene,singularities,rays")
    assert len(rows) == 3
    assert (tmp_path / "consistency_details.jsonl").exists()


def test_unreadable_scene_names_the_flag(tmp_path: Path, capsys) -> None:
    assert run(["check", "--scene", str(tmp_path / "missing.json")]) == 2
    out = capsys.readouterr().out
    assert out.startswith("[FAIL] --scene ")
    assert "cannot read file" in out
    assert run(["scatter", "--diagram", str(tmp_path / "missing.json")]) == 2
    assert "[FAIL] --diagram " in capsys.readouterr().out


def test_malformed_scene_field_names_the_flag(tmp_path: Path, capsys) -> None:
    data = json.loads(Path(PENTAGON).read_text(encoding="utf-8"))
    data["singularities"][0]["direction"] = ["x", 0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data), encoding="utf-8")
    assert run(["check", "--scene", str(bad)]) == 2
    out = capsys.readouterr().out
    assert "--scene" in out
    assert "singularities[0].direction" in out
    del data["singularities"][0]["pos"]
    bad.write_text(json.dumps(data), encoding="utf-8")
    assert run(["tropical-count", "--scene", str(bad), "--class", "1,1"]) == 2
    assert "singularities[0]: missing 'pos'" in capsys.readouterr().out


def test_class_beyond_cutoff_names_the_flag(capsys) -> None:
    argv = ["wallcross", "--scene", PAIRING_TWO, "--mode", "degree", "--order", "3", "--at", "0,0"]
    assert run(argv + ["--class", "4,4"]) == 2
    out = capsys.readouterr().out
    assert "[FAIL] --class (4,4)" in out
    assert "beyond the cutoff" in out
    assert run(argv + ["--class", "2,2"]) == 0
    assert "ΔΩ̃(2,2)=2" in capsys.readouterr().out


def test_max_l_beyond_cutoff_names_the_flag(capsys) -> None:
    argv = ["invariants", "--scene", PENTAGON_DEGREE, "--at", "1/2,1/2", "--direction", "1,1"]
    assert run(argv + ["--max-l", "5"]) == 2
    assert "[FAIL] --max-l 5" in capsys.readouterr().out
    assert run(argv + ["--max-l", "4"]) == 0
    assert "4\t" in capsys.readouterr().out
