import math
import statistics

import numpy as np
import pytest

from gatedpore.engine import RunResult, WalkerState
from gatedpore.params import DiscreteParams
from gatedpore.stats import (
    SWEEP_HEADER,
    EstimatorConfig,
    SweepRow,
    estimate_K,
    read_sweep_csv,
    sweep_convergence,
    write_gnuplot_dat,
    write_sweep_csv,
)


DISC = DiscreteParams(n0=10, n1=4, ell=0.5, s=0.025, r=0.5,
                      tau_bar=20, sigma_bar=5, M=1000)


def _mk_result(F, U, residual, disc=DISC):
    n = len(F)
    state = WalkerState(
        pos=np.ones(4, dtype=np.int64),
        rng=np.zeros((4, 4), dtype=np.uint64),
        alive=np.ones(4, dtype=np.bool_),
        cycles_done=n,
    )
    return RunResult(
        disc=disc, seed=0, cycles_requested=n,
        F=np.asarray(F, dtype=np.int64),
        U=np.asarray(U, dtype=np.int64),
        V=np.zeros(n, dtype=np.int64),
        residual=np.asarray(residual, dtype=np.int64),
        truncated=False, state=state,
    )


def test_estimate_screens_and_averages():
    rng = np.random.default_rng(4201)
    n = 20
    U = rng.integers(500, 2000, size=n)
    F = rng.integers(10, 90, size=n)
    residual = np.full(n, 900)
    residual[5] = 50      # below default min population of 100
    U[7] = 0              # no density signal, skipped

    res = _mk_result(F, U, residual)
    est = estimate_K(res)

    # cycles 0,1 are burn-in (ceil(0.1 * 20) = 2), 5 and 7 screened
    kept = [i for i in range(2, n) if i not in (5, 7)]
    assert est.cycles_used == len(kept) == 16
    assert est.cycles_total == n

    scale = DISC.ell / DISC.s
    ks = [scale * F[i] / U[i] for i in kept]
    assert est.K == pytest.approx(statistics.fmean(ks), rel=1e-12)
    assert est.stderr == pytest.approx(
        statistics.stdev(ks) / math.sqrt(len(ks)), rel=1e-12)
    assert len(est.k_values) == 16


def test_no_burn_in_keeps_every_cycle():
    F = [10, 20, 30, 40]
    U = [100, 100, 100, 100]
    res = _mk_result(F, U, [500] * 4)
    cfg = EstimatorConfig(burn_in_fraction=0.0, min_population=0)
    est = estimate_K(res, cfg)
    assert est.cycles_used == 4
    assert est.K == pytest.approx((DISC.ell / DISC.s) * 0.25, rel=1e-12)


def test_zero_u_error_policy():
    res = _mk_result([5, 5, 5, 5], [100, 0, 100, 100], [500] * 4)
    cfg = EstimatorConfig(burn_in_fraction=0.0, min_population=0,
                          zero_U_policy="error")
    with pytest.raises(ValueError, match="U = 0"):
        estimate_K(res, cfg)
    # same data passes under the skip policy
    est = estimate_K(res, EstimatorConfig(burn_in_fraction=0.0, min_population=0))
    assert est.cycles_used == 3


def test_too_few_surviving_cycles():
    res = _mk_result([5, 5, 5], [100, 100, 100], [10, 10, 10])
    with pytest.raises(ValueError, match="at least 3"):
        estimate_K(res)


def test_config_validation():
    with pytest.raises(ValueError):
        EstimatorConfig(burn_in_fraction=1.0)
    with pytest.raises(ValueError):
        EstimatorConfig(min_population=-1)
    with pytest.raises(ValueError):
        EstimatorConfig(zero_U_policy="drop")
    assert EstimatorConfig().resolve_min_population(50_000) == 500
    assert EstimatorConfig().resolve_min_population(1_000) == 100
    assert EstimatorConfig(min_population=7).resolve_min_population(10**6) == 7


def test_sweep_fit_recovers_exact_line():
    taus = np.array([0.1, 0.2, 0.3, 0.4])
    Ks = 3.5 - 1.2 * taus
    fit = sweep_convergence(taus, Ks)
    assert fit.intercept == pytest.approx(3.5, abs=1e-12)
    assert fit.slope == pytest.approx(-1.2, abs=1e-12)
    assert np.max(np.abs(fit.residuals)) < 1e-12
    assert fit.predicted(0.25) == pytest.approx(3.5 - 1.2 * 0.25, rel=1e-12)


def test_sweep_fit_with_noise():
    rng = np.random.default_rng(907)
    taus = np.linspace(0.05, 0.5, 200)
    Ks = 2.0 + 0.8 * taus + rng.normal(0.0, 0.01, size=taus.size)
    fit = sweep_convergence(taus, Ks)
    assert fit.intercept == pytest.approx(2.0, abs=0.02)
    assert fit.slope == pytest.approx(0.8, abs=0.1)


def test_sweep_fit_needs_three_distinct_taus():
    with pytest.raises(ValueError, match="distinct tau"):
        sweep_convergence([0.1, 0.1, 0.2], [1.0, 1.1, 1.2])
    with pytest.raises(ValueError):
        sweep_convergence([0.1, 0.2], [1.0, 1.1])


def test_sweep_csv_round_trip(tmp_path):
    rows = [
        SweepRow(n0=1000, tau=0.015811388300841896, sigma_bar=500,
                 D1=0.1, K=3.41, stderr=0.07, cycles_used=36),
        SweepRow(n0=2000, tau=0.01118033988749895, sigma_bar=500,
                 D1=0.1, K=3.47, stderr=0.05, cycles_used=40),
    ]
    path = tmp_path / "sweep.csv"
    write_sweep_csv(path, rows)
    text = path.read_text()
    assert text.splitlines()[0] == SWEEP_HEADER
    back = read_sweep_csv(path)
    assert back == rows
    # floats survive exactly thanks to repr round-tripping
    assert back[0].tau == rows[0].tau


def test_read_sweep_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError, match="header"):
        read_sweep_csv(path)


def test_gnuplot_table(tmp_path):
    rows = [
        SweepRow(n0=1000, tau=0.25, sigma_bar=500, D1=0.1,
                 K=3.0, stderr=0.1, cycles_used=10),
        SweepRow(n0=2000, tau=0.125, sigma_bar=500, D1=0.1,
                 K=3.2, stderr=0.1, cycles_used=10),
    ]
    path = tmp_path / "sweep.dat"
    write_gnuplot_dat(path, rows)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#")
    assert [float(tok) for tok in lines[1].split()] == [0.25, 3.0]
    assert [float(tok) for tok in lines[2].split()] == [0.125, 3.2]
