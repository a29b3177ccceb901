from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from nervetower.cli import main
from nervetower.formats import (
    FormatError,
    dumps,
    load,
    loads,
    nerve_tower_to_dict,
    parse_cover,
    parse_group_tower,
    parse_nerve_tower,
    group_tower_to_dict,
)
from nervetower.steenrod import SteenrodReport, solenoid
from nervetower.tower import TowerAnalysis

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def texts(out: str) -> list[str]:
    return [g["text"] for g in json.loads(out)["groups"]]


@pytest.mark.parametrize("name, expect", [
    ("rp2.json", ["Z", "Z/2", "0"]),
    ("torus.json", ["Z", "Z^2", "Z"]),
    ("klein_bottle.json", ["Z", "Z/2 + Z", "0"]),
    ("point.json", ["Z"]),
])
def test_homology_command(capsys, name, expect):
    code, out, _ = run(capsys, "homology", DATA / name)
    assert code == 0 and texts(out) == expect


def test_homology_reduced_and_mod(capsys):
    _, out, _ = run(capsys, "homology", DATA / "point.json", "--reduced")
    assert texts(out) == ["0"]
    _, out, _ = run(capsys, "homology", DATA / "klein_bottle.json", "--mod", "2")
    assert texts(out)[2] == "Z/2"


def test_nerve_command(capsys):
    code, out, _ = run(capsys, "nerve", DATA / "circle_cover_1.json")
    d = json.loads(out)
    assert code == 0 and d["counts"] == [4, 4]
    _, out, _ = run(capsys, "nerve", DATA / "chain_cover.json", "--kind", "vietoris")
    assert json.loads(out)["counts"] == [3, 2]


def test_validation_errors_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "nerve", DATA / "not_a_cover.json")
    assert code == 2 and "not covered" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "stages": [\n')
    code, _, err = run(capsys, "tower", bad)
    assert code == 2 and ":3:" in err
    code, _, _ = run(capsys, "homology", DATA / "rp2.json", "--mod", "1")
    assert code == 2
    code, _, _ = run(capsys, "steenrod", "nowhere", "--param", "p=2")
    assert code == 2
    code, _, _ = run(capsys, "steenrod", "solenoid", "--param", "q=2")
    assert code == 2


def test_tower_command(capsys):
    _, out, _ = run(capsys, "tower", DATA / "times_two_tower.json", "--colim")
    d = json.loads(out)
    a = TowerAnalysis.from_dict(d["analysis"])
    assert a.ml.fails and str(a.lim.group) == "0" and a.lim1.value == "nonzero_uncountable"
    assert d["colim_of_tail"]["text"] == "Z[1/2]"
    _, out, _ = run(capsys, "tower", DATA / "identity_tower.json")
    a = TowerAnalysis.from_dict(json.loads(out)["analysis"])
    assert a.ml.holds and str(a.lim.group) == "Z" and a.lim1.value == "zero"
    _, out, _ = run(capsys, "tower", DATA / "finite_tower.json")
    assert json.loads(out)["analysis"]["lim1"] == "zero"


def test_strict_exit_code(capsys):
    code, _, _ = run(capsys, "tower", DATA / "truncated_tower.json", "--strict")
    assert code == 3
    code, _, _ = run(capsys, "tower", DATA / "truncated_tower.json")
    assert code == 0
    code, _, _ = run(capsys, "steenrod", "cantor", "--strict")
    assert code == 3
    code, _, _ = run(capsys, "steenrod", "solenoid", "--strict")
    assert code == 0


def test_steenrod_command(capsys):
    _, out, _ = run(capsys, "steenrod", "solenoid", "--param", "p=2", "--param", "depth=5")
    r = SteenrodReport.from_dict(json.loads(out))
    assert r.homology[1].status == "exact" and str(r.homology[1].group) == "0"
    assert r.homology[0].status == "extension_unresolved"
    assert str(r.cohomology[1].value) == "Z[1/2]"
    _, out, _ = run(capsys, "steenrod", "circle_constant", "--unreduced")
    r = SteenrodReport.from_dict(json.loads(out))
    assert [str(e.group) for e in r.homology] == ["Z", "Z"]
    assert [str(c.value) for c in r.cohomology] == ["Z", "Z"]
    _, out, _ = run(capsys, "steenrod", "point")
    assert all(e["steenrod_text"] == "0" for e in json.loads(out)["homology"])


def test_steenrod_from_files(capsys):
    _, out, _ = run(capsys, "steenrod", DATA / "solenoid_2_2.json")
    assert json.loads(out)["cohomology"][1]["cech_cohomology"]["text"] == "Z[1/2]"
    _, out, _ = run(capsys, "steenrod", DATA / "circle_cover_tower.json", "--strict")
    assert json.loads(out)["homology"][1]["steenrod_status"] == "truncated"


def test_spaces_and_out(capsys, tmp_path):
    target = tmp_path / "spaces.json"
    code, out, _ = run(capsys, "spaces", "--out", target)
    assert code == 0 and out == ""
    names = [s["name"] for s in json.loads(target.read_text())["spaces"]]
    assert names == sorted(["circle_constant", "circle_lemma_tower", "solenoid", "cantor", "point"])


def test_determinism_across_processes(tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"r{k}.json"
        subprocess.run([sys.executable, "-m", "nervetower.cli", "steenrod", "solenoid", "--out", str(p)], check=True)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point_exit_code():
    r = subprocess.run([sys.executable, "-m", "nervetower.cli", "nerve", str(DATA / "not_a_cover.json")],
                       capture_output=True, text=True)
    assert r.returncode == 2


# --------------------------------------------------------------------------
# Formats
# --------------------------------------------------------------------------


def test_formats_round_trip():
    t = solenoid(3, 2)
    d = nerve_tower_to_dict(t)
    again = parse_nerve_tower(loads(dumps(d)))
    assert nerve_tower_to_dict(again) == d
    g = parse_group_tower(load(DATA / "finite_tower.json"))
    assert parse_group_tower(loads(dumps(group_tower_to_dict(g)))) == g


@pytest.mark.parametrize("path", sorted(DATA.glob("*.json")))
def test_data_files_are_canonical(path):
    text = path.read_text()
    assert dumps(json.loads(text)) == text


def test_format_error_paths():
    with pytest.raises(FormatError, match=r"sets\[1\]"):
        parse_cover({"points": [0, 1], "sets": [[0, 1], "x"]})
    with pytest.raises(FormatError, match=r"bonds\[0\]"):
        parse_group_tower({"stages": [{"rank": 1}, {"rank": 1}], "bonds": [[[1, 2]]]})
    with pytest.raises(FormatError, match=r"stages\[0\]"):
        parse_group_tower({"stages": [{"rank": 0, "torsion": [4, 6]}], "bonds": []})
    with pytest.raises(FormatError, match="tail"):
        parse_nerve_tower({"complexes": [{"vertices": [0]}], "bonds": [],
                           "tail": {"complex": {"vertices": [0, 1]}, "bond": [[0, 0]], "equivalence": [[0, 0], [1, 0]]}})
