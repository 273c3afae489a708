import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from qmcanneal.harness import ConfigError, ExperimentConfig, nearest_rank, parse_config, summarize
from qmcanneal.harness.cli import main
from qmcanneal.harness.experiment import read_trace


def write_cfg(tmp_path, **kw):
    base = dict(objective="sphere", d=2, R=2, N=300, replications=2, base_seed=3, x0=[0.1, 0.9])
    base.update(kw)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(base))
    return str(path)


def files(out):
    return {name: open(os.path.join(out, name), "rb").read() for name in sorted(os.listdir(out))
            if name != "timing.txt"}


# -- config ---------------------------------------------------------------------

def test_config_defaults_and_echo():
    cfg = parse_config('{"R": "inf", "d": 1, "nu": "inf"}')
    assert math.isinf(cfg.R) and math.isinf(cfg.nu)
    eff = cfg.effective()
    assert eff.t == 0 and eff.x0 == [0.5] and eff.checkpoints == [100, 1000]
    assert parse_config(eff.dumps()).effective() == eff


@pytest.mark.parametrize("text", ['{"N": -1}', '{"replications": 0}', '{"objective": "nope"}',
                                  '{"R": "big"}', '{"colour": 1}', '{"kernel": {"x": 1}}', "[1]", "{",
                                  '{"adaptation": "blocks", "R": "inf"}', '{"x0": [0.5]}'])
def test_bad_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_nearest_rank():
    xs = [5.0, 1.0, 3.0, 2.0, 4.0]
    assert nearest_rank(xs, 0.5) == 3.0
    assert nearest_rank(xs, 0.1) == 1.0
    assert nearest_rank(xs, 0.9) == 5.0
    assert nearest_rank([7.0], 0.25) == 7.0


# -- run ------------------------------------------------------------------------

def test_run_zero_iterations(tmp_path):
    out = str(tmp_path / "o")
    assert main(["run", "--config", write_cfg(tmp_path, N=0, replications=1), "--out", out, "--quiet"]) == 0
    lines = open(os.path.join(out, "trace_000.csv")).read().splitlines()
    assert lines[0] == "n,x_1,x_2,value,best_value,accepted,A_n,T_n,sigma_eff,kernel_index"
    assert len(lines) == 2 and lines[1].startswith("0,0.10000000000000001,")


def test_run_is_deterministic_and_replications_differ(tmp_path):
    cfg = write_cfg(tmp_path)
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    assert main(["run", "--config", cfg, "--out", a, "--quiet"]) == 0
    assert main(["run", "--config", cfg, "--out", b, "--quiet", "--workers", "2"]) == 0
    assert files(a) == files(b)
    assert files(a)["trace_000.csv"] != files(a)["trace_001.csv"]
    assert "timing.txt" in os.listdir(a)


def test_echo_reproduces_outputs(tmp_path):
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    assert main(["run", "--config", write_cfg(tmp_path), "--out", a, "--quiet"]) == 0
    assert main(["run", "--config", os.path.join(a, "config.json"), "--out", b, "--quiet"]) == 0
    assert files(a) == files(b)


def test_summary_is_a_function_of_the_csvs(tmp_path):
    out = str(tmp_path / "o")
    cfg_path = write_cfg(tmp_path, N=1200, replications=3, checkpoints=[10, 100, 1000])
    assert main(["run", "--config", cfg_path, "--out", out, "--quiet", "--stride", "50"]) == 0
    cfg = parse_config(open(os.path.join(out, "config.json")).read())
    best, rates = {}, {}
    for r in range(3):
        t = read_trace(os.path.join(out, "trace_%03d.csv" % r))
        assert 0 in t["n"] and 1200 in t["n"] and len(t) < 1200
        np.testing.assert_array_equal(t["best_value"], np.maximum.accumulate(t["best_value"]))
        for c in cfg.checkpoint_list():
            row = t[t["n"] == c][0]
            best.setdefault(c, []).append(float(row["best_value"]))
            rates.setdefault(c, []).append(math.nan)
    text = summarize(cfg, best, rates)
    want = [ln for ln in text.splitlines() if ln.startswith("gap.")]
    got = [ln for ln in open(os.path.join(out, "summary.txt")).read().splitlines() if ln.startswith("gap.")]
    assert got == want


def test_csv_floats_round_trip(tmp_path):
    out = str(tmp_path / "o")
    assert main(["run", "--config", write_cfg(tmp_path, replications=1), "--out", out, "--quiet"]) == 0
    t = read_trace(os.path.join(out, "trace_000.csv"))
    from qmcanneal.objectives import get_objective
    obj = get_objective("sphere", 2)
    for row in t[1:20]:
        assert obj((row["x_1"], row["x_2"])) == row["value"]


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"N": "many"}')
    assert main(["run", "--config", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 2
    blocked = tmp_path / "blocked"
    blocked.write_text("a file where a directory is expected")
    assert main(["run", "--config", write_cfg(tmp_path), "--out", str(blocked / "x"), "--quiet"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["verify", "everything"])
    assert exc.value.code == 2


# -- verify -------------------------------------------------------------------------

def test_verify_conditions_fail_case(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"d": 1, "beta": 2.0, "R": 0}))
    assert main(["verify", "conditions", "--config", str(cfg)]) == 1
    out = capsys.readouterr().out
    assert "check=condRate1 result=fail" in out
    assert "check=cooling result=pass" in out


def test_verify_conditions_pass_case(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"d": 1, "beta": 1.0, "R": 0}))
    assert main(["verify", "conditions", "--config", str(cfg), "--quiet"]) == 0


def test_verify_nets_passes(tmp_path):
    report = tmp_path / "r.txt"
    assert main(["verify", "nets", "--quiet", "--out", str(report)]) == 0
    lines = report.read_text().splitlines()
    assert lines[-1] == "suite=nets overall=pass"
    assert any("net[s=5,t=5,m=8]" in ln for ln in lines)


def test_console_script_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "qmcanneal.harness.cli", "verify", "conditions", "--quiet"],
                         capture_output=True, text=True)
    assert res.returncode in (0, 1)
    assert "overall=" in res.stdout


def test_default_config_is_constructible():
    cfg = ExperimentConfig()
    assert cfg.build_kernel(cfg.table_t()).d == cfg.d
