import csv
import io
import json

import pytest

from oscdecay import cli

CUBIC = {"weights": ["1/4", "1/2"], "monomials": [[2, 1, "1"]]}


def cfg(**kw):
    return json.dumps({**CUBIC, **kw})


def write(tmp_path, text, name="cfg.json"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_minimal_config_materializes_defaults():
    c = cli.parse_config(cfg(command="analyze"))
    for key in cli.DEFAULTS:
        assert key in c.settings
    assert c.settings["rtol"] == 1e-6 and c.settings["seed"] == 0
    assert c.settings["weights"] == ["1/4", "1/2"]


def test_sharpness_defaults_switch_offset():
    c = cli.parse_config(cfg(command="sharpness"))
    assert c.surface.offset_c == 1.0
    assert c.settings["cutoff"]["scale"] == 3.0


@pytest.mark.parametrize(
    "text, code",
    [
        ('{"command": "analyze",', "malformed-json"),
        ("[1, 2]", "malformed-json"),
        (json.dumps({"command": "decay", "weights": ["1", "1"], "monomials": [[2, 0, "1"], [0, 2, "1"]]}), "conic"),
        (json.dumps({"command": "sharpness", "weights": ["1", "1"], "monomials": [[2, 0, "1"]]}), "conic"),
        (json.dumps({"command": "analyze", "weights": ["1/4", "1/2"], "monomials": [[2, 1, "1"], [0, 1, "1"]]}),
         "heterogeneous"),
        (cfg(command="decay", tol=0), "bad-tolerance"),
        (cfg(command="decay", rtol=-1e-3), "bad-tolerance"),
        (cfg(command="decay", slack="x"), "bad-tolerance"),
        (cfg(command="frobnicate"), "bad-field"),
        (cfg(command="analyze", colour="red"), "bad-field"),
        (json.dumps({"command": "analyze", "weights": ["1/4", "1/2"]}), "bad-field"),
    ],
)
def test_error_codes(text, code):
    with pytest.raises(cli.ConfigError) as err:
        cli.parse_config(text)
    assert err.value.code == code


def test_conic_allowed_for_analyze():
    c = cli.parse_config(json.dumps({"command": "analyze", "weights": ["1", "1"], "monomials": [[2, 0, "1"]]}))
    assert c.phase.weights.is_conic


def test_hash_ignores_output_location():
    a = cli.parse_config(cfg(command="analyze", out="x"))
    b = cli.parse_config(cfg(command="analyze", out="y", threads=4))
    c = cli.parse_config(cfg(command="analyze", seed=1))
    assert a.config_hash == b.config_hash != c.config_hash


def test_flags_override_file(tmp_path):
    path = write(tmp_path, cfg(command="verify", seed=3, verify={"polys": 2, "points": 2, "phases": 1,
                                                                  "disjunction_points": 5, "curves": 1}))
    assert cli.main(["verify", "--config", str(path), "--out", str(tmp_path), "--seed", "9"]) == 0
    doc = json.loads((tmp_path / "verify.json").read_text())
    assert doc["config"]["seed"] == 9 and doc["result"]["seed"] == 9


def test_analyze_cubic(tmp_path):
    path = write(tmp_path, cfg(command="analyze"))
    assert cli.main(["analyze", "--config", str(path), "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "analyze.json").read_text(encoding="utf-8"))
    res = doc["result"]
    assert res["height"] == "2" and res["ord"] == 2
    dirs = res["critical_directions"]
    assert sorted(tuple(round(v, 12) for v in d["theta"]) for d in dirs) == [(0.0, -1.0), (0.0, 1.0)]
    assert all(d["order_n"] == 2 for d in dirs)
    assert all(fac["n"] == 2 for fac in res["factorizations"])
    assert doc["config_hash"] == cli.parse_config(cfg(command="analyze")).config_hash


def test_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, '{"command": ')
    assert cli.main(["analyze", "--config", str(bad)]) == 2
    assert "malformed-json" in capsys.readouterr().err
    assert cli.main(["analyze", "--config", str(tmp_path / "missing.json")]) == 1


def test_small_decay_run_writes_csv(tmp_path):
    text = cfg(command="decay", alpha=0.1, cutoff={"kind": "radial_bump", "center": [0, 1], "radius": 0.25},
               damping={"mode": "gradient_power"}, t_grid={"lo_exp": 4, "hi_exp": 14, "points": 11},
               sigma_grid={"sigmas": [[0, 0]]}, threshold=-0.45, slack=0.05)
    path = write(tmp_path, text)
    status = cli.main(["decay", "--config", str(path), "--out", str(tmp_path)])
    doc = json.loads((tmp_path / "decay.json").read_text())
    assert status == (0 if doc["pass"] else 1)
    raw = (tmp_path / "decay.csv").read_bytes()
    assert b"\r\n" in raw
    rows = list(csv.DictReader(io.StringIO(raw.decode())))
    assert rows and all(r["config_hash"] == doc["config_hash"] for r in rows)


def test_sharpness_run(tmp_path):
    path = write(tmp_path, cfg(command="sharpness", crosscheck_N=None))
    assert cli.main(["sharpness", "--config", str(path), "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "sharpness.json").read_text())
    assert [r["verdict"] for r in doc["result"]["reports"]] == ["Diverges", "Bounded"]
    assert (tmp_path / "sharpness_p1.8.csv").exists() and (tmp_path / "sharpness_p2.5.csv").exists()


def test_verify_is_byte_identical(tmp_path):
    small = {"polys": 5, "points": 5, "phases": 3, "disjunction_points": 20, "curves": 3}
    path = write(tmp_path, cfg(command="verify", verify=small))
    outs = []
    for name in ("a", "b"):
        assert cli.main(["verify", "--config", str(path), "--out", str(tmp_path / name), "--seed", "42"]) == 0
        outs.append((tmp_path / name / "verify.json").read_bytes())
    assert outs[0] == outs[1]
