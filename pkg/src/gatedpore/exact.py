"""Exact distribution propagation for the gated lattice walk.

Dense transfer-operator arithmetic on the site-occupancy distribution of
a single walker.  Everything here is deterministic linear algebra, which
makes it the reference the Monte Carlo engine is validated against: the
law of one walker fixes the expected per-cycle absorption count E[F_i]
and sampling-site occupancy time E[U_i] of an ensemble exactly.

Kept dense on purpose; instances are capped at ``SIZE_CAP`` sites.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import DiscreteParams

SIZE_CAP = 2048

MASS_TOL = 1e-12


def closed_stationary(disc: DiscreteParams) -> np.ndarray:
    """Stationary site distribution of the gate-closed chain.

    Bulk sites carry weight (1-r) and layer sites weight 1, normalized:
    detailed balance of the lazy walk concentrates mass on the layer by
    the factor 1/(1-r).
    """
    w = np.ones(disc.n_sites)
    w[: disc.n0] = 1.0 - disc.r
    return w / w.sum()


def transition_operator(disc: DiscreteParams, open_gate: bool) -> np.ndarray:
    """Column-stochastic one-step operator, absorbed state last.

    Column x holds the outgoing probabilities of site x+1; the final
    column/row is the absorbing cemetery.  Interior sites hop left and
    right with probability (1-r(x))/2 each and stay with r(x), where
    r(x) = 0 on the bulk and r on the layer.  Site 1 reflects (stay 1/2).
    The last site exchanges with the outside only while the gate is
    open: stay r(x), exit (1-r(x))/2.
    """
    n = disc.n_sites
    if n > SIZE_CAP:
        raise ValueError(f"n0+n1={n} exceeds the dense-operator cap {SIZE_CAP}")
    r = disc.r
    T = np.zeros((n + 1, n + 1))
    for j in range(n):
        rj = r if j >= disc.n0 else 0.0
        hop = (1.0 - rj) / 2.0
        if j == 0:
            T[0, 0] += 0.5
            T[1, 0] += 0.5
        elif j < n - 1:
            T[j - 1, j] += hop
            T[j + 1, j] += hop
            T[j, j] += rj
        else:
            # gate site: the layer laziness applies only if a layer exists
            rb = r if disc.n1 > 0 else 0.0
            hop = (1.0 - rb) / 2.0
            T[j - 1, j] += hop
            if open_gate:
                T[n, j] += hop
                T[j, j] += rb
            else:
                T[j, j] += rb + hop
    T[n, n] = 1.0
    return T


@dataclass
class DistributionVector:
    """Single-walker law: site probabilities, absorbed mass, step count."""

    probs: np.ndarray
    absorbed: float = 0.0
    t: int = 0

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)
        self.validate()

    def validate(self):
        if self.probs.ndim != 1:
            raise ValueError("probs must be a vector")
        if np.any(self.probs < -MASS_TOL) or self.absorbed < -MASS_TOL:
            raise ValueError("negative probability mass")
        mass = self.probs.sum() + self.absorbed
        if abs(mass - 1.0) > MASS_TOL:
            raise ValueError(f"total mass {mass} deviates from 1")

    def copy(self) -> "DistributionVector":
        return DistributionVector(self.probs.copy(), self.absorbed, self.t)


def initial_distribution(disc: DiscreteParams) -> DistributionVector:
    return DistributionVector(closed_stationary(disc))


def propagate(dist: DistributionVector, disc: DiscreteParams,
              steps: int) -> DistributionVector:
    """Advance the law by ``steps`` gate-scheduled steps in place.

    The phase of step t (0-based, counted from the start of the run) is
    open when t mod tau_bar < sigma_bar, so cycles begin with the open
    phase.  Returns the same object for chaining.
    """
    T_open = transition_operator(disc, True)
    T_closed = transition_operator(disc, False)
    full = np.empty(disc.n_sites + 1)
    for _ in range(steps):
        phase_open = (dist.t % disc.tau_bar) < disc.sigma_bar
        T = T_open if phase_open else T_closed
        full[:-1] = dist.probs
        full[-1] = dist.absorbed
        out = T @ full
        dist.probs = out[:-1]
        dist.absorbed = float(out[-1])
        dist.t += 1
    dist.validate()
    return dist


@dataclass(frozen=True)
class CycleExpectations:
    """Per-cycle expected counts for an ensemble of disc.M walkers."""

    EF: np.ndarray          # expected absorptions per cycle
    EU: np.ndarray          # expected occupancy-time at the sampling site
    EV: np.ndarray          # expected walker-steps spent on the layer
    ratio: np.ndarray       # EF/EU, the expected-value analogue of k_i

    def __len__(self):
        return len(self.EF)


def expected_cycle_observables(disc: DiscreteParams,
                               cycles: int) -> CycleExpectations:
    """Exact E[F_i], E[U_i] (and layer occupancy) for the first cycles.

    Starts from the closed-gate stationary law, mirroring the engine's
    initial ensemble, and tallies the sampling site n0 after each step
    update (post-step convention).  Counts are scaled by disc.M.
    """
    T_open = transition_operator(disc, True)
    T_closed = transition_operator(disc, False)
    n = disc.n_sites
    full = np.empty(n + 1)
    full[:-1] = closed_stationary(disc)
    full[-1] = 0.0
    EF = np.zeros(cycles)
    EU = np.zeros(cycles)
    EV = np.zeros(cycles)
    for c in range(cycles):
        absorbed_before = full[-1]
        for t in range(disc.tau_bar):
            T = T_open if t < disc.sigma_bar else T_closed
            full = T @ full
            EU[c] += full[disc.n0 - 1]
            EV[c] += full[disc.n0 : n].sum()
        EF[c] = full[-1] - absorbed_before
    M = float(disc.M)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(EU > 0, EF / EU, np.nan)
    return CycleExpectations(EF=EF * M, EU=EU * M, EV=EV * M, ratio=ratio)


def alpha_estimate(n0: int, n1: int, r: float,
                   sigma_bars: list[int] | tuple[int, ...]
                   ) -> tuple[np.ndarray, float]:
    """Open-gate absorption coefficient alpha(sigma_bar) and its growth.

    For each sigma_bar the gate-closed stationary law is evolved through
    sigma_bar open steps; alpha is the absorbed mass divided by the
    stationary per-site layer occupancy 1/((1-r)*n0 + n1).  The second
    return value is the least-squares slope of log(alpha) against
    log(sigma_bar), close to 1/2 in the diffusive regime.
    """
    if len(sigma_bars) < 2:
        raise ValueError("need at least two sigma_bar values for a slope")
    sigma_bars = sorted(int(sb) for sb in sigma_bars)
    if sigma_bars[0] < 1:
        raise ValueError("sigma_bar values must be >= 1")
    # tau_bar only needs to exceed the largest open window here
    disc = DiscreteParams(n0=n0, n1=n1, ell=1.0, s=1.0, r=r,
                          tau_bar=max(sigma_bars), sigma_bar=max(sigma_bars),
                          M=1)
    T_open = transition_operator(disc, True)
    z = (1.0 - r) * n0 + n1
    full = np.empty(disc.n_sites + 1)
    alphas = np.empty(len(sigma_bars))
    for k, sb in enumerate(sigma_bars):
        full[:-1] = closed_stationary(disc)
        full[-1] = 0.0
        for _ in range(sb):
            full = T_open @ full
        alphas[k] = full[-1] * z
    slope = float(np.polyfit(np.log(sigma_bars), np.log(alphas), 1)[0])
    return alphas, slope
