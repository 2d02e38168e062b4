"""End-to-end checks of the command-line interface: config handling,
exit codes, output files, manifests, and reproducibility."""

import json

import numpy as np
import pytest

from gatedpore.cli import derive_seed, main
from gatedpore.exact import expected_cycle_observables
from gatedpore.params import ContinuumParams, bridge

SIM_CFG = """\
# potassium run at desk scale
L0 = 1.0
D0 = 1.0
D1 = 0.1
mu = 1.0
n0 = 300
sigma_bar = 150
M = 1000
seed = 7
"""

PDE_CFG = """\
L0 = 1.0
D0 = 1.0
D1 = 0.1
mu = 1.0
tau = 0.2
sigma_tau = 0.04
J0 = 64
m = 8
T_final = 0.3
"""

FAM_CFG = """\
eps_c = 1.0
eps_a = 0.75
sigma_eps_c = 1.0
sigma_eps_a = 1.0
sigma_tau_c = 1.0
sigma_tau_a = 2.0
D1_c = 1.0
D1_a = 0.5
N = 3
"""


def _write(path, text):
    path.write_text(text)
    return str(path)


def _kv(stdout):
    out = {}
    for line in stdout.splitlines():
        if " = " in line:
            k, v = line.split(" = ", 1)
            out[k] = v
    return out


def test_missing_key_exits_2_and_names_it(tmp_path, capsys):
    cfg = _write(tmp_path / "c.cfg", "mu = 1.0\n")
    assert main(["simulate", "--config", cfg]) == 2
    assert "'L0'" in capsys.readouterr().err


def test_unknown_key_rejected_with_line_number(tmp_path, capsys):
    cfg = _write(tmp_path / "c.cfg", "L0 = 1.0\nbogus = 3\n")
    assert main(["simulate", "--config", cfg]) == 2
    err = capsys.readouterr().err
    assert "bogus" in err and ":2:" in err


def test_unparsable_value_names_key(tmp_path, capsys):
    cfg = _write(tmp_path / "c.cfg", "n0 = lots\n")
    assert main(["simulate", "--config", cfg]) == 2
    assert "'n0'" in capsys.readouterr().err


def test_simulate_outputs_and_report(tmp_path, capsys):
    cfg = _write(tmp_path / "sim.cfg", SIM_CFG)
    out = tmp_path / "run"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    kv = _kv(capsys.readouterr().out)
    for key in ("K", "stderr", "k_theory", "rel_dev", "cycles_used"):
        assert key in kv
    assert (out / "cycles.csv").exists()
    man = json.loads((out / "cycles.manifest.json").read_text())
    assert man["command"] == "simulate"
    assert man["params"]["seed"] == 7
    assert man["outputs"] == ["cycles.csv"]
    # the lattice derivation is recorded alongside the inputs
    assert man["params"]["n1"] > 0
    assert float(kv["k_theory"]) == pytest.approx(3.568248232305542)


def test_manifest_round_trip_is_bit_exact(tmp_path, capsys):
    cfg = _write(tmp_path / "sim.cfg", SIM_CFG)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", cfg, "--out", str(a)]) == 0
    manifest = a / "cycles.manifest.json"
    assert main(["simulate", "--config", str(manifest),
                 "--out", str(b)]) == 0
    capsys.readouterr()
    assert (a / "cycles.csv").read_bytes() == (b / "cycles.csv").read_bytes()


def test_seed_flag_overrides_file_key(tmp_path, capsys):
    cfg = _write(tmp_path / "sim.cfg", SIM_CFG)
    out = tmp_path / "run"
    assert main(["simulate", "--config", cfg, "--out", str(out),
                 "--seed", "99"]) == 0
    capsys.readouterr()
    man = json.loads((out / "cycles.manifest.json").read_text())
    assert man["params"]["seed"] == 99


def test_preset_fills_missing_ensemble_size(tmp_path, capsys):
    base = "L0 = 1.0\nD0 = 1.0\nD1 = 0.1\nmu = 1.0\nn0 = 60\nsigma_bar = 40\n"
    cfg = _write(tmp_path / "o.cfg", base)
    out = tmp_path / "o1"
    assert main(["oracle", "--config", cfg, "--cycles", "2",
                 "--out", str(out)]) == 0
    capsys.readouterr()
    man = json.loads((out / "oracle.manifest.json").read_text())
    assert man["params"]["M"] == 10_000
    cfg2 = _write(tmp_path / "o2.cfg", base + "M = 500\n")
    out2 = tmp_path / "o2"
    assert main(["oracle", "--config", cfg2, "--cycles", "2",
                 "--out", str(out2)]) == 0
    capsys.readouterr()
    man2 = json.loads((out2 / "oracle.manifest.json").read_text())
    assert man2["params"]["M"] == 500


def test_too_few_cycles_is_a_numerical_failure(tmp_path, capsys):
    cfg = _write(tmp_path / "sim.cfg", SIM_CFG)
    code = main(["simulate", "--config", cfg, "--out", str(tmp_path / "r"),
                 "--cycles", "3"])
    assert code == 3
    assert "screening" in capsys.readouterr().err


def test_sweep_output_is_jobs_independent(tmp_path, capsys):
    cfg = _write(tmp_path / "sw.cfg", (
        "L0 = 1.0\nD0 = 1.0\nD1 = 0.1\nmu = 1.0\nM = 1000\nseed = 11\n"
        "n0_list = 200,300\nsigma_bar_list = 100,200\n"))
    s1, s2 = tmp_path / "s1", tmp_path / "s2"
    assert main(["sweep", "--config", cfg, "--out", str(s1)]) == 0
    assert main(["sweep", "--config", cfg, "--out", str(s2),
                 "--jobs", "2"]) == 0
    capsys.readouterr()
    assert (s1 / "sweep.csv").read_bytes() == (s2 / "sweep.csv").read_bytes()
    assert (s1 / "sweep_s100.dat").exists()
    assert (s1 / "sweep_s200.dat").exists()
    man = json.loads((s1 / "sweep.manifest.json").read_text())
    assert set(man["outputs"]) == {"sweep.csv", "sweep_s100.dat",
                                   "sweep_s200.dat"}


def test_oracle_prints_expectation_csv(tmp_path, capsys):
    cfg = _write(tmp_path / "o.cfg", (
        "L0 = 1.0\nD0 = 1.0\nD1 = 0.1\nmu = 1.0\n"
        "n0 = 60\nsigma_bar = 40\nM = 1000\n"))
    assert main(["oracle", "--config", cfg, "--cycles", "4"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "cycle,EF,EU"
    assert len(lines) == 5
    cont = ContinuumParams(L0=1.0, D0=1.0, D1=0.1, mu=1.0)
    br = bridge(cont, 60, 40, 1000)
    exp = expected_cycle_observables(br.disc, 4)
    cyc, ef, eu = lines[1].split(",")
    assert cyc == "0"
    assert float(ef) == float(exp.EF[0])
    assert float(eu) == float(exp.EU[0])


def test_pde_robin_reproduces_radiation_constant(tmp_path, capsys):
    cfg = _write(tmp_path / "p.cfg", PDE_CFG)
    out = tmp_path / "p"
    assert main(["pde", "--config", cfg, "--mode", "robin",
                 "--out", str(out)]) == 0
    kv = _kv(capsys.readouterr().out)
    assert float(kv["rel_dev"]) < 1e-5
    header = (out / "pde_robin.csv").read_text().splitlines()[0]
    assert header == "t,mass,boundary_ratio"


def test_pde_alternating_snapshots_recorded(tmp_path, capsys):
    cfg = _write(tmp_path / "p.cfg", PDE_CFG)
    out = tmp_path / "p"
    assert main(["pde", "--config", cfg, "--mode", "alternating",
                 "--snap", "0.1,0.25", "--out", str(out)]) == 0
    capsys.readouterr()
    man = json.loads((out / "pde_alternating.manifest.json").read_text())
    snaps = [o for o in man["outputs"] if o.startswith("snap_")]
    assert len(snaps) == 2
    for name in snaps:
        lines = (out / name).read_text().splitlines()
        assert lines[0] == "x,u"
        assert len(lines) > 64


def test_pde_study_rows_and_monotonicity_flag(tmp_path, capsys):
    cfg = _write(tmp_path / "p.cfg", (
        "L0 = 1.0\nD0 = 1.0\nD1 = 0.25\nmu = 1.0\ntau = 0.2\n"
        "J0 = 128\nm = 8\nT_final = 0.5\nhalvings = 4\n"))
    out = tmp_path / "p"
    assert main(["pde", "--config", cfg, "--mode", "study",
                 "--out", str(out)]) == 0
    kv = _kv(capsys.readouterr().out)
    assert float(kv["rho_eff"]) == pytest.approx(2.256758334191025)
    lines = (out / "pde_study.csv").read_text().splitlines()
    assert lines[0] == "tau,distance,boundary_ratio"
    assert len(lines) == 5


def test_classify_reports_both_species(tmp_path, capsys):
    cfg = _write(tmp_path / "f.cfg", FAM_CFG)
    assert main(["classify", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "species=K" in out and "species=Na" in out
    assert out.count("regime=") == 2
    assert "rho=" not in out


def test_classify_single_species_with_geometry(tmp_path, capsys):
    cfg = _write(tmp_path / "f.cfg", FAM_CFG + (
        "species = Na\nmeasure_P0 = 1.0\nPhi = 1.0\nM_total = 1.0\n"
        "D0 = 1.0\n"))
    assert main(["classify", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "species=K" not in out
    assert "rho=0.0" in out


def test_classify_partial_geometry_rejected(tmp_path, capsys):
    cfg = _write(tmp_path / "f.cfg", FAM_CFG + "Phi = 1.0\n")
    assert main(["classify", "--config", cfg]) == 2
    assert "measure_P0" in capsys.readouterr().err


def test_report_recovers_synthetic_intercept(tmp_path, capsys):
    rows = ["n0,tau,sigma_bar,D1,K,stderr,cycles_used"]
    for tau in (0.1, 0.2, 0.4):
        rows.append(f"100,{tau!r},50,0.1,{2.0 + 3.0 * tau!r},0.01,40")
    csv = _write(tmp_path / "sweep.csv", "\n".join(rows) + "\n")
    assert main(["report", csv]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "file,sigma_bar,D1,points,intercept,k_theory,rel_dev"
    fields = out[1].split(",")
    assert float(fields[4]) == pytest.approx(2.0, abs=1e-10)


def test_report_identical_inputs_give_identical_rows(tmp_path, capsys):
    rows = ["n0,tau,sigma_bar,D1,K,stderr,cycles_used",
            "100,0.1,50,0.1,2.3,0.01,40",
            "200,0.05,50,0.1,2.15,0.01,40",
            "400,0.025,50,0.1,2.075,0.01,40"]
    csv = _write(tmp_path / "sweep.csv", "\n".join(rows) + "\n")
    assert main(["report", csv, csv]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 3
    assert out[1] == out[2]


def test_report_points_at_malformed_line(tmp_path, capsys):
    csv = _write(tmp_path / "sweep.csv",
                 "n0,tau,sigma_bar,D1,K,stderr,cycles_used\n"
                 "100,oops,50,0.1,2.3,0.01,40\n")
    assert main(["report", csv]) == 2
    assert ":2:" in capsys.readouterr().err


def test_derived_seeds_are_stable_and_distinct():
    """Gridpoint seeds depend only on base seed and coordinates, so
    paired species runs share randomness by construction."""
    assert derive_seed(1, 200, 100) == derive_seed(1, 200, 100)
    seen = {derive_seed(1, n0, sb)
            for n0 in (200, 300, 400) for sb in (100, 200)}
    assert len(seen) == 6
    assert derive_seed(2, 200, 100) != derive_seed(1, 200, 100)
