"""Command-line interface: outputs, exit codes, determinism."""

import json

import pytest

from trophodge import cli, cycles, fans


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_fan_validate_p2(capsys):
    code, out, _ = run(capsys, "fan-validate", "--builtin", "p2")
    assert code == 0
    assert out == "cones=7 smooth=yes complete=yes f=(1,3,3)\n"


def test_fan_validate_from_file(tmp_path, capsys):
    path = tmp_path / "fan.json"
    path.write_text(json.dumps(fans.to_json_dict(fans.builtin("p1"))))
    code, out, _ = run(capsys, "fan-validate", "--input", str(path))
    assert code == 0
    assert "complete=yes" in out


def test_unknown_builtin_exits_2(capsys):
    code, _, err = run(capsys, "cohomology", "--builtin", "p99", "--all")
    assert code == 2
    assert "error" in err


def test_missing_file_exits_2(capsys):
    code, _, _ = run(capsys, "fan-validate", "--input", "/no/such/file.json")
    assert code == 2


def test_invalid_fan_exits_3(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "rank": 2,
        "rays": [[1, 0], [0, 1], [1, 1], [1, -1]],
        "cones": [[0, 1], [2, 3]],
    }))
    code, _, _ = run(capsys, "fan-validate", "--input", str(path))
    assert code == 3


def test_cohomology_table_p1(capsys):
    code, out, _ = run(capsys, "cohomology", "--builtin", "p1", "--all")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "0\t1\t0"
    assert lines[2] == "1\t0\t1"


def test_cohomology_single_entry(capsys):
    code, out, _ = run(capsys, "cohomology", "--builtin", "p2", "--p", "1", "--q", "2")
    assert code == 0 and out == "0\n"
    code, out, _ = run(capsys, "cohomology", "--builtin", "p2", "--p", "2", "--q", "2")
    assert code == 0 and out == "1\n"


def test_cohomology_out_of_range_exits_2(capsys):
    code, _, _ = run(capsys, "cohomology", "--builtin", "p2", "--p", "5", "--q", "0")
    assert code == 2


def test_weightss_levels(tmp_path, capsys):
    code, out, _ = run(capsys, "weightss", "--builtin", "p1", "--level", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["level"] == 2
    assert {"p": 1, "q": 1, "dim": 1} in payload["entries"]
    code, out, _ = run(capsys, "weightss", "--builtin", "p1", "--level", "1")
    assert json.loads(out)["entries"] == [
        {"p": 0, "q": 0, "dim": 1},
        {"p": 0, "q": 1, "dim": 1},
        {"p": 1, "q": 1, "dim": 2},
    ]


def test_weightss_nonsmooth_exits_5(tmp_path, capsys):
    path = tmp_path / "sing.json"
    path.write_text(json.dumps(
        {"rank": 2, "rays": [[1, 0], [1, 2]], "cones": [[0, 1]]}
    ))
    code, _, _ = run(capsys, "weightss", "--input", str(path))
    assert code == 5
    code, _, _ = run(capsys, "chow", "--input", str(path), "--codim", "1")
    assert code == 5


def test_chow_all(capsys):
    code, out, _ = run(capsys, "chow", "--builtin", "p1xp1", "--all")
    assert code == 0
    assert json.loads(out) == {"dims": [1, 2, 1]}


def test_pair_balanced_weight(tmp_path, capsys):
    mw = cycles.MinkowskiWeight(
        fans.builtin("p2"),
        1,
        {c: 1 for c in fans.builtin("p2").cones_of_dim(1)},
    )
    path = tmp_path / "line.json"
    path.write_text(cycles.weight_to_json(mw))
    code, out, _ = run(capsys, "pair", "--input", str(path))
    assert code == 0
    assert out in ("1\n", "-1\n")


def test_pair_principal_divisor(tmp_path, capsys):
    fan = fans.builtin("p1xp1")
    weights = cycles.principal_divisor_weights(fan, (1, 0))
    mw = cycles.MinkowskiWeight(
        fan, 1,
        {fans.Cone(2, [r]): w for r, w in zip(fan.rays, weights) if w},
        divisor=True,
    )
    path = tmp_path / "div.json"
    path.write_text(cycles.weight_to_json(mw))
    code, out, _ = run(capsys, "pair", "--input", str(path))
    assert code == 0
    assert out == "0\n0\n"


def test_pair_unbalanced_exits_6(tmp_path, capsys):
    fan = fans.builtin("p2")
    rays = fan.cones_of_dim(1)
    mw = cycles.MinkowskiWeight(fan, 1, {rays[0]: 1, rays[1]: 1, rays[2]: 2})
    path = tmp_path / "bad.json"
    path.write_text(cycles.weight_to_json(mw))
    code, _, err = run(capsys, "pair", "--input", str(path))
    assert code == 6
    assert "unbalanced" in err


def test_subdivide_p2(capsys):
    code, out, _ = run(capsys, "subdivide", "--builtin", "p2", "--ray", "1,1")
    assert code == 0
    assert fans.from_json_dict(json.loads(out)) == fans.builtin("blowup_p2")


def test_subdivide_outside_support_exits_3(capsys):
    code, _, _ = run(
        capsys, "subdivide", "--builtin", "affine_space(2)", "--ray=-1,0"
    )
    assert code == 3


def test_verify_single_builtin(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "torus(3)")
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_verify_corrupt_sign_exits_1(capsys):
    code, out, _ = run(
        capsys, "verify", "--builtin", "p1xp1", "--corrupt-d1-sign"
    )
    assert code == 1
    report = json.loads(out)["reports"][0]
    failed = [c["name"] for c in report["checks"] if not c["pass"]]
    assert "e2_matches_tropical" in failed


def test_output_files_are_deterministic(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        code = cli.main([
            "cohomology", "--builtin", "hirzebruch(2)", "--all",
            "--output", str(path),
        ])
        assert code == 0
        capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    for path in (a, b):
        code = cli.main(["weightss", "--builtin", "p2", "--output", str(path)])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_pair_requires_input(capsys):
    code, _, _ = run(capsys, "pair")
    assert code == 2
