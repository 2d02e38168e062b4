from __future__ import annotations

import math

import numpy as np
import pytest

from gatedpore import ContinuumParams, DiscreteParams, bridge, k_theory


def make_cont(D1=0.1, **kw):
    base = dict(L0=1.0, D0=1.0, D1=D1, mu=1.0)
    base.update(kw)
    return ContinuumParams(**base)


def test_bridge_reference_case():
    # Independent arithmetic for the documented case L0=D0=mu=1,
    # D1=0.1, n0=1000, sigma_bar=500: s = 5e-7, so sigma_bar/s = 1e9
    # and tau_bar = isqrt(1e9); n1 = round(sqrt(0.05 * tau_bar)).
    res = bridge(make_cont(), n0=1000, sigma_bar=500)
    d = res.disc
    assert d.ell == 1e-3
    assert d.s == 5e-7
    assert d.r == 0.9
    assert d.tau_bar == math.isqrt(10 ** 9) == 31622
    assert d.n1 == round(math.sqrt(0.05 * 31622)) == 40
    assert res.tau == d.s * d.tau_bar
    assert 0.0 <= res.b < 1.0
    assert res.warnings == ()


def test_bridge_large_run_configuration():
    # r = 0.9 and the depth used by the reference long runs.
    res = bridge(make_cont(), n0=5023, sigma_bar=1000)
    assert res.disc.r == 0.9
    assert res.disc.tau_bar == math.isqrt(2000 * 5023 ** 2)
    assert res.disc.n1 == round(math.sqrt(0.05 * res.disc.tau_bar))


def test_k_theory_values():
    assert k_theory(1.0, 1.0, 0.1) == pytest.approx(3.568, abs=5e-4)
    assert k_theory(1.0, 1.0, 0.25) == pytest.approx(2.257, abs=5e-4)
    assert k_theory(1.0, 1.0, 1.0) == pytest.approx(1.1284, abs=5e-5)
    assert k_theory(1.0, 1.0, 1.0) == pytest.approx(2.0 / math.sqrt(math.pi))
    with pytest.raises(ValueError):
        k_theory(1.0, 0.0, 0.1)


def test_bridge_roundtrip_exact():
    rng = np.random.default_rng(7)
    for _ in range(200):
        L0 = float(rng.uniform(0.1, 10.0))
        D0 = float(rng.uniform(0.1, 4.0))
        D1 = float(D0 * rng.uniform(0.05, 1.0))
        n0 = int(rng.integers(2, 5000))
        cont = ContinuumParams(L0=L0, D0=D0, D1=D1, mu=1.0)
        d = bridge(cont, n0=n0, sigma_bar=64).disc
        assert abs(d.ell * n0 - L0) <= math.ulp(L0)
        assert abs(2.0 * D0 * d.s - d.ell ** 2) <= math.ulp(d.ell ** 2)


def test_bridge_monotonicity():
    cont = make_cont()
    taus = [bridge(cont, n0=n, sigma_bar=500).disc.tau_bar
            for n in (500, 1000, 2000, 4000)]
    assert taus == sorted(taus) and len(set(taus)) == 4
    sigs = [bridge(cont, n0=1000, sigma_bar=sb).disc.tau_bar
            for sb in (125, 250, 500, 1000)]
    assert sigs == sorted(sigs) and len(set(sigs)) == 4
    # realized continuum period shrinks when the lattice is refined
    assert bridge(cont, 2000, 500).tau < bridge(cont, 1000, 500).tau


def test_bridge_layer_depth_consistency():
    # n1 tracks n0*sqrt(D1*tau)/L0 to within one site.
    rng = np.random.default_rng(11)
    for _ in range(100):
        D1 = float(rng.uniform(0.02, 1.0))
        n0 = int(rng.integers(50, 4000))
        sb = int(rng.integers(8, 2000))
        res = bridge(make_cont(D1=D1), n0=n0, sigma_bar=sb)
        d = res.disc
        assert abs(d.n1 - n0 * math.sqrt(D1 * res.tau)) <= 1.0


def test_bridge_no_layer_variant():
    res = bridge(make_cont(D1=1.0), n0=100, sigma_bar=16, affinity_layer=False)
    assert res.disc.n1 == 0
    assert res.disc.r == 0.0


def test_bridge_rejects_bad_inputs():
    cont = make_cont()
    with pytest.raises(ValueError):
        bridge(cont, n0=0, sigma_bar=500)
    with pytest.raises(ValueError):
        bridge(cont, n0=1000, sigma_bar=0)
    with pytest.raises(ValueError, match="tau_bar"):
        # coarse lattice: tau_bar = sqrt(8*sigma_bar) falls below sigma_bar
        bridge(cont, n0=2, sigma_bar=100)


def test_continuum_validation():
    with pytest.raises(ValueError):
        make_cont(D1=2.0)        # D1 > D0
    with pytest.raises(ValueError):
        make_cont(D1=0.0)
    with pytest.raises(ValueError):
        ContinuumParams(L0=1, D0=1, D1=1, mu=1, sigma_tau=0.1)  # no tau
    with pytest.raises(ValueError):
        ContinuumParams(L0=1, D0=1, D1=1, mu=1, tau=1.0, sigma_tau=2.0)
    c = ContinuumParams(L0=1, D0=1, D1=0.25, mu=1, tau=0.04, sigma_tau=0.0016)
    assert c.delta == pytest.approx(math.sqrt(0.25 * 0.04))
    assert make_cont().delta is None


def test_discrete_validation_and_warnings():
    d = DiscreteParams(n0=3, n1=1, ell=0.25, s=0.03125, r=0.5,
                       tau_bar=64, sigma_bar=2, M=100)
    assert d.n_sites == 4
    assert d.validity_warnings() == []
    # always-closed gate is allowed for stationarity studies
    DiscreteParams(n0=3, n1=1, ell=0.25, s=0.03125, r=0.5,
                   tau_bar=16, sigma_bar=0, M=100)
    with pytest.raises(ValueError):
        DiscreteParams(n0=3, n1=1, ell=0.25, s=0.03125, r=0.5,
                       tau_bar=16, sigma_bar=17, M=100)
    with pytest.raises(ValueError):
        DiscreteParams(n0=1, n1=0, ell=1.0, s=0.5, r=0.0,
                       tau_bar=4, sigma_bar=1, M=10)   # single site
    with pytest.raises(ValueError):
        DiscreteParams(n0=3, n1=1, ell=0.25, s=0.03125, r=1.0,
                       tau_bar=16, sigma_bar=2, M=100)
    slow = DiscreteParams(n0=3, n1=5, ell=0.25, s=0.03125, r=0.5,
                          tau_bar=20, sigma_bar=4, M=100)
    msgs = slow.validity_warnings()
    assert any("10*sigma_bar" in m for m in msgs)
    assert any("n1**2" in m for m in msgs)


def test_report_line_roundtrip():
    d = bridge(make_cont(), n0=1000, sigma_bar=500).disc
    line = d.report()
    assert "\n" not in line
    got = dict(kv.split("=", 1) for kv in line.split())
    assert int(got["n0"]) == 1000
    assert int(got["n1"]) == 40
    assert float(got["ell"]) == d.ell
    assert float(got["s"]) == d.s
    assert int(got["tau_bar"]) == 31622
