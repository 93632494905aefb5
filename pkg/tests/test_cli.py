"""Command-line interface: exit codes, artifacts and output contracts."""

import subprocess
import sys

import pytest

from swarmform.cli import main

from conftest import SCENARIOS

DEFAULT = str(SCENARIOS / "two_agent_switching_step.cfg")

SHORT = """
plant.kp = 6.0
plant.kd = 25.0
plant.g = 9.8
poles.rl = 12.0
poles.iml = 0.1
poles.imr = 0.55
sim.t_end = 16.0
interaction.variant = repulsion
interaction.c_max = 0.05
interaction.d_t = 30.0
interaction.eps = 0.1
agent[0].pos = 50.0
agent[0].vel = -1.5
agent[0].radius = 20.0
agent[1].pos = 0.0
agent[1].vel = 3.0
agent[1].radius = 20.0
"""


@pytest.fixture
def short_file(tmp_path):
    p = tmp_path / "short.cfg"
    p.write_text(SHORT)
    return str(p)


# --- gains -------------------------------------------------------------------

def test_gains_reference_output(capsys):
    rc = main(["gains", "--kp", "6", "--kd", "25", "--g", "9.8",
               "--rl", "12", "--iml", "0.1", "--imr", "0.55"])
    out = capsys.readouterr().out
    assert rc == 0
    kv = dict(line.split(": ", 1) for line in out.strip().split("\n") if ": " in line)
    assert float(kv["k_pos"]) == pytest.approx(0.0296347, abs=1e-6)
    assert float(kv["residual"]) < 1e-9
    assert kv["desired_polynomial"].split() == ["1", "24", "144.3125", "7.26", "43.563025"]


def test_gains_symmetric_pole_polynomial(capsys):
    rc = main(["gains", "--kp", "6", "--kd", "25", "--g", "9.8",
               "--rl", "0", "--iml", "1", "--imr", "1"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "desired_polynomial: 1 0 2 0 1" in out


def test_gains_rejects_zero_gravity(capsys):
    rc = main(["gains", "--kp", "6", "--kd", "25", "--g", "0",
               "--rl", "12", "--iml", "0.1", "--imr", "0.55"])
    assert rc == 2
    assert "g" in capsys.readouterr().err


# --- run ----------------------------------------------------------------------

def test_run_writes_artifacts(tmp_path, short_file, capsys):
    out = tmp_path / "out"
    rc = main(["run", short_file, "--out", str(out)])
    assert rc == 0
    for name in ("trace.csv", "report.txt", "velocities.svg", "distances.svg"):
        assert (out / name).is_file()
    report = (out / "report.txt").read_text()
    assert "variant: repulsion" in report
    assert "coupling_events: none" in report


def test_run_overrides_duration(tmp_path, short_file):
    out = tmp_path / "out"
    rc = main(["run", short_file, "--out", str(out), "--t-end", "2.0"])
    assert rc == 0
    n_rows = (out / "trace.csv").read_text().count("\n") - 1
    assert n_rows == 201  # floor(2 / 0.01) + 1


def test_run_outputs_reproducible(tmp_path, short_file):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["run", short_file, "--out", str(out1)]) == 0
    assert main(["run", short_file, "--out", str(out2)]) == 0
    for name in ("trace.csv", "report.txt", "velocities.svg", "distances.svg"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_run_missing_scenario_exits_2(tmp_path, capsys):
    rc = main(["run", str(tmp_path / "nope.cfg"), "--out", str(tmp_path / "o")])
    assert rc == 2
    assert "not found" in capsys.readouterr().err


def test_run_invalid_scenario_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text(SHORT + "interaction.d_t = 45\n")
    rc = main(["run", str(bad), "--out", str(tmp_path / "o")])
    assert rc == 2


def test_run_divergent_scenario_exits_3(tmp_path, capsys):
    cfg = tmp_path / "диverge.cfg"
    cfg.write_text(SHORT.replace("sim.t_end = 16.0", "sim.t_end = 2000\nsim.dt = 1.0")
                   .replace("agent[0].vel = -1.5", "agent[0].vel = -1.5\nagent[0].tilt = 0.3"))
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rc = main(["run", str(cfg), "--out", str(tmp_path / "o")])
    assert rc == 3
    assert "abort" in capsys.readouterr().err


# --- compare --------------------------------------------------------------------

def test_compare_identical_variants_ratio_one(short_file, capsys):
    rc = main(["compare", short_file, "--variants", "repulsion,repulsion"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "ratio delta_rms(repulsion)/delta_rms(repulsion): 1" in out


def test_compare_reports_attraction_no_coupling(short_file, capsys):
    rc = main(["compare", short_file, "--variants", "attraction"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "variant: attraction" in out
    assert "coupling_events: none" in out


def test_compare_unknown_variant_exits_2(short_file, capsys):
    rc = main(["compare", short_file, "--variants", "repulsion,sorcery"])
    assert rc == 2
    assert "sorcery" in capsys.readouterr().err


# --- sweep ----------------------------------------------------------------------

def _rows(out):
    lines = out.strip().split("\n")
    assert lines[0] == "value,status,coupled,delta_rms,first_coupling_t,first_uncoupling_t"
    return [line.split(",") for line in lines[1:]]


def test_sweep_c_max_threshold(tmp_path, capsys):
    # low saturation lets the pair couple, high saturation bounces it off
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text(SHORT.replace("interaction.variant = repulsion",
                                 "interaction.variant = switching_smooth")
                   .replace("sim.t_end = 16.0", "sim.t_end = 15.0")
                   + "edge[0].a = 0\nedge[0].b = 1\n")
    rc = main(["sweep", str(cfg), "--param", "interaction.c_max",
               "--from", "0.02", "--to", "0.20", "--steps", "10"])
    out = capsys.readouterr().out
    assert rc == 0
    rows = _rows(out)
    assert len(rows) == 10
    coupled = [int(r[2]) for r in rows]
    assert coupled[0] == 1
    assert coupled[-1] == 0
    assert sorted(coupled, reverse=True) == coupled  # monotone threshold


def test_sweep_single_step_equals_run(default_run, capsys):
    sc, _, metrics = default_run("switching_step")
    rc = main(["sweep", DEFAULT, "--param", "interaction.c_max",
               "--from", "0.05", "--to", "0.05", "--steps", "1"])
    out = capsys.readouterr().out
    assert rc == 0
    (row,) = _rows(out)
    assert float(row[0]) == 0.05
    assert row[1] == "ok"
    assert float(row[3]) == pytest.approx(metrics.delta_rms, rel=1e-9)
    assert float(row[4]) == pytest.approx(metrics.coupling_events[0][1], abs=1e-9)


def test_sweep_invalid_values_reported_per_row(tmp_path, capsys):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text(SHORT.replace("sim.t_end = 16.0", "sim.t_end = 6.0"))
    rc = main(["sweep", str(cfg), "--param", "interaction.d_t",
               "--from", "39", "--to", "45", "--steps", "3"])
    out = capsys.readouterr().out
    assert rc == 0
    rows = _rows(out)
    # d_t >= 40 violates the coupling-range rule only when an edge exists;
    # without edges all values are accepted
    assert all(r[1] == "ok" for r in rows)
    cfg.write_text(SHORT.replace("sim.t_end = 16.0", "sim.t_end = 6.0")
                   + "edge[0].a = 0\nedge[0].b = 1\n")
    rc = main(["sweep", str(cfg), "--param", "interaction.d_t",
               "--from", "39", "--to", "45", "--steps", "3"])
    out = capsys.readouterr().out
    assert rc == 0
    rows = _rows(out)
    assert rows[0][1] == "ok"
    assert rows[1][1].startswith("error:") and rows[2][1].startswith("error:")


def test_sweep_rejects_unsweepable_parameter(capsys):
    rc = main(["sweep", DEFAULT, "--param", "interaction.variant",
               "--from", "0", "--to", "1", "--steps", "2"])
    assert rc == 2
    assert "not sweepable" in capsys.readouterr().err


def test_sweep_writes_file(tmp_path, short_file):
    out = tmp_path / "sweep.csv"
    rc = main(["sweep", short_file, "--param", "agent[1].vel",
               "--from", "3.0", "--to", "3.0", "--steps", "1", "--out", str(out)])
    assert rc == 0
    assert out.read_text().startswith("value,status,coupled")


def test_run_default_reports(tmp_path):
    # full-length shipped scenarios exercised through the CLI
    out = tmp_path / "step"
    rc = main(["run", DEFAULT, "--out", str(out)])
    assert rc == 0
    report = (out / "report.txt").read_text()
    (line,) = [l for l in report.splitlines() if l.startswith("uncoupling_events:")]
    t_u = float(line.split("@", 1)[1])
    assert t_u > 29.0

    out = tmp_path / "smooth"
    rc = main(["run", str(SCENARIOS / "two_agent_switching_smooth.cfg"), "--out", str(out)])
    assert rc == 0
    report = (out / "report.txt").read_text()
    (line,) = [l for l in report.splitlines() if l.startswith("delta_rms:")]
    assert float(line.split(":", 1)[1]) < 0.01


# --- module entry point -----------------------------------------------------------

def test_module_invocation():
    proc = subprocess.run(
        [sys.executable, "-m", "swarmform.cli", "gains", "--kp", "6", "--kd", "25",
         "--g", "9.8", "--rl", "12", "--iml", "0.1", "--imr", "0.55"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "k_pos: 0.0296347" in proc.stdout
