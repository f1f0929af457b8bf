import json
import subprocess
import sys

import pytest

from refscissors.cli import EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_USAGE, run, split_ring_list


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_witt_json(capsys):
    code, out, _ = call(capsys, "witt", "--ring", "gf:3", "--json")
    assert code == EXIT_OK
    assert out.strip() == '{"free_rank":0,"torsion":[4]}'


def test_verify_psi1_squares(capsys):
    code, out, _ = call(capsys, "verify", "psi1-squares", "--ring", "gf:5")
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("pass")
    assert out.strip().endswith("pass")


def test_complex_homology_trivial(capsys):
    code, out, _ = call(capsys, "complex", "homology", "--ring", "gf:4", "--dim", "1", "--json")
    assert code == EXIT_OK and json.loads(out) == {"free_rank": 0, "torsion": []}
    code, out, _ = call(capsys, "complex", "homology", "--ring", "gf:4", "--dim", "1")
    assert out.strip().endswith("= 0")


def test_usage_errors(capsys):
    assert call(capsys, "verify", "nonsense", "--ring", "gf:3")[0] == EXIT_USAGE
    assert call(capsys, "witt", "--ring", "gf:6")[0] == EXIT_USAGE
    assert call(capsys, "witt")[0] == EXIT_USAGE
    assert call(capsys, "homology", "--ring", "gf:3", "--group", "GL2")[0] == EXIT_USAGE
    assert call(capsys, "complex", "homology", "--ring", "gf:3", "--max-degree", "9")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        run(["no-such-command"])
    assert e.value.code == EXIT_USAGE


def test_cap_exceeded(capsys):
    code, _, err = call(capsys, "homology", "--ring", "gf:7", "--group", "SL2", "--dim", "3")
    assert code == EXIT_CAP and "cap" in err
    assert call(capsys, "homology", "--ring", "gf:3", "--max-group-order", "10")[0] == EXIT_CAP


def test_cap_override(capsys):
    code, out, _ = call(capsys, "homology", "--ring", "gf:3", "--group", "cyclic:6", "--dim", "3",
                        "--cap", "3=5", "--json")
    assert code == EXIT_CAP
    code, out, _ = call(capsys, "homology", "--ring", "gf:3", "--group", "cyclic:6", "--dim", "3", "--json")
    assert code == EXIT_OK and json.loads(out)["torsion"] == [6]


def test_ring_lists():
    assert split_ring_list("gf:3,zmod:4") == ["gf:3", "zmod:4"]
    assert split_ring_list("gf:3,prod:gf:5,gf:4,gf:4") == ["gf:3", "prod:gf:5,gf:4,gf:4"]
    assert split_ring_list("prod:gf:5,gf:4;gf:3") == ["prod:gf:5,gf:4", "gf:3"]


def test_verify_scissors_on_product(capsys):
    code, out, _ = call(capsys, "verify", "scissors", "--rings", "prod:gf:5,gf:4,gf:4", "--json")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["ok"]
    assert {c["name"]: c["status"] for c in rep["checks"]}["lambda-psi1"] == "pass"


def test_json_is_deterministic(capsys):
    outs = [call(capsys, "verify", "witt", "--rings", "gf:3,gf:5", "--json")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert "time" not in outs[0]
    assert rep["rings"] == ["gf:3", "gf:5"]


def test_parallel_matches_serial(capsys):
    a = call(capsys, "verify", "ge2", "--rings", "gf:3,gf:4,zmod:4", "--json")[1]
    b = call(capsys, "verify", "ge2", "--rings", "gf:3,gf:4,zmod:4", "--json", "--jobs", "2")[1]
    assert a == b


@pytest.mark.parametrize("argv", [
    ["ring", "--ring", "zmod:8"],
    ["units", "--ring", "gf:9"],
    ["ge2", "--ring", "zmod:6"],
    ["complex", "sizes", "--ring", "gf:3"],
    ["complex", "check", "--ring", "gf:3"],
    ["complex", "orbits", "--ring", "gf:5", "--dim", "2"],
    ["rp", "--ring", "gf:5", "--symbols"],
    ["rp-direct", "--ring", "gf:4"],
    ["gw", "--ring", "gf:5"],
    ["k1mw", "--ring", "gf:5"],
    ["homology", "--ring", "gf:3", "--group", "B", "--dim", "2"],
    ["rel-homology", "--ring", "gf:3", "--group", "B", "--sub", "T", "--dim", "1"],
    ["s-groups", "--ring", "gf:3", "--dim", "1"],
    ["sm2", "--ring", "gf:5"],
])
def test_commands_run(capsys, argv):
    code, out, _ = call(capsys, *argv)
    assert code == EXIT_OK and out.strip()
    code, out, _ = call(capsys, *argv, "--json")
    json.loads(out)


def test_rp_csv(capsys):
    code, out, _ = call(capsys, "rp", "--ring", "gf:5", "--csv")
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert len(lines) == 1 + 2 * 6          # header + |G_A| translates of each relation pair
    assert all(len(l.split(",")) == 6 for l in lines)


def test_certificate_output(capsys, tmp_path):
    dest = tmp_path / "cert.json"
    code, out, _ = call(capsys, "homology", "--ring", "gf:3", "--group", "cyclic:4", "--dim", "1",
                        "--certificate", str(dest))
    cert = json.loads(dest.read_text())
    assert code == EXIT_OK and cert["degree"] == 1 and "smith" in cert


def test_multiple_rings_json(capsys):
    code, out, _ = call(capsys, "witt", "--rings", "gf:3,gf:5", "--json")
    assert json.loads(out) == {"gf:3": {"free_rank": 0, "torsion": [4]}, "gf:5": {"free_rank": 0, "torsion": [2, 2]}}


def test_console_script(tmp_path):
    env_cmd = [sys.executable, "-m", "refscissors.cli", "witt", "--ring", "gf:3", "--json", "--cache-dir", str(tmp_path)]
    out = subprocess.run(env_cmd, capture_output=True, text=True, check=True).stdout
    assert out.strip() == '{"free_rank":0,"torsion":[4]}'
    assert list(tmp_path.rglob("*.json"))


def test_options_before_and_after_subcommand(capsys):
    assert run(["--ring", "gf:4", "--json", "rp", "--ring", "zmod:4"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"gf:4": {"free_rank": 0, "torsion": [5]}, "zmod:4": {"free_rank": 0, "torsion": []}}
