"""Parameter records for the gated-pore transport models.

Two levels of description are used throughout the package: a continuum
one (slab of length L0, bulk diffusivity D0, an affinity layer of
diffusivity D1 <= D0 and width delta at the pore, gate period tau) and a
discrete one (lattice of n0 + n1 sites, lazy random walk, gate period
tau_bar steps of which sigma_bar are open).  ``bridge`` maps the first
onto the second so that lattice runs approximate the continuum model
with a prescribed number of open steps per cycle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


def k_theory(mu: float, D0: float, D1: float) -> float:
    """Homogenized flux-to-density ratio 2*mu*D0 / sqrt(pi*D1)."""
    if mu <= 0 or D0 <= 0 or D1 <= 0:
        raise ValueError("mu, D0, D1 must be positive")
    return 2.0 * mu * D0 / math.sqrt(math.pi * D1)


@dataclass(frozen=True)
class ContinuumParams:
    """Continuum description of the gated slab.

    Attributes
    ----------
    L0 : float
        Length of the bulk region (layer excluded, so the slab is
        L0 + delta long once tau is set).
    D0 : float
        Bulk diffusivity.
    D1 : float
        Affinity-layer diffusivity, 0 < D1 <= D0.
    mu : float
        Gate-speed coefficient; the open fraction per cycle is
        sigma_tau = (mu * tau)**2 under the critical scaling.
    tau : float or None
        Gate period.  None for records that only feed ``bridge``.
    sigma_tau : float or None
        Open time per cycle, 0 <= sigma_tau <= tau; 0 keeps the gate
        permanently shut.
    """

    L0: float
    D0: float
    D1: float
    mu: float
    tau: float | None = None
    sigma_tau: float | None = None

    def __post_init__(self):
        if self.L0 <= 0 or self.D0 <= 0 or self.mu <= 0:
            raise ValueError("L0, D0, mu must be positive")
        if not 0 < self.D1 <= self.D0:
            raise ValueError("need 0 < D1 <= D0")
        if self.tau is not None and self.tau <= 0:
            raise ValueError("tau must be positive when set")
        if self.sigma_tau is not None:
            if self.tau is None:
                raise ValueError("sigma_tau requires tau")
            if not 0 <= self.sigma_tau <= self.tau:
                raise ValueError("need 0 <= sigma_tau <= tau")

    @property
    def delta(self) -> float | None:
        """Affinity-layer width sqrt(D1*tau), or None before tau is set."""
        if self.tau is None:
            return None
        return math.sqrt(self.D1 * self.tau)

    @property
    def k_theory(self) -> float:
        return k_theory(self.mu, self.D0, self.D1)


@dataclass(frozen=True)
class DiscreteParams:
    """Lattice description: sites 1..n0 are bulk, n0+1..n0+n1 the layer.

    The walk is lazy on the layer (stay probability r) and simple on the
    bulk; the gate at the last site is open for the first sigma_bar of
    every tau_bar steps.  M walkers run independently.
    """

    n0: int
    n1: int
    ell: float
    s: float
    r: float
    tau_bar: int
    sigma_bar: int
    M: int = 10_000

    def __post_init__(self):
        if self.n0 < 1 or self.n1 < 0:
            raise ValueError("need n0 >= 1 and n1 >= 0")
        if self.n0 + self.n1 < 2:
            raise ValueError("lattice needs at least 2 sites")
        if self.ell <= 0 or self.s <= 0:
            raise ValueError("ell and s must be positive")
        if not 0 <= self.r < 1:
            raise ValueError("need 0 <= r < 1")
        if self.tau_bar < 1:
            raise ValueError("tau_bar must be >= 1")
        # sigma_bar = 0 is the permanently closed gate used by the
        # stationarity checks; otherwise 1 <= sigma_bar <= tau_bar.
        if not 0 <= self.sigma_bar <= self.tau_bar:
            raise ValueError("need 0 <= sigma_bar <= tau_bar")
        if self.M < 1:
            raise ValueError("M must be >= 1")

    @property
    def n_sites(self) -> int:
        return self.n0 + self.n1

    @property
    def tau(self) -> float:
        """Realized continuum gate period s * tau_bar."""
        return self.s * self.tau_bar

    def validity_warnings(self) -> list[str]:
        """Non-fatal scale-separation checks; empty list means clean."""
        out = []
        if self.sigma_bar > 0 and self.tau_bar <= 10 * self.sigma_bar:
            out.append(
                "tau_bar <= 10*sigma_bar: open phase not short against the period"
            )
        if self.n1 > 0 and self.tau_bar <= self.n1 ** 2:
            out.append(
                "tau_bar <= n1**2: layer does not re-equilibrate within one cycle"
            )
        return out

    def report(self) -> str:
        """Single line of key=value pairs, stable field order."""
        pairs = [
            ("n0", self.n0), ("n1", self.n1), ("ell", self.ell),
            ("s", self.s), ("r", self.r), ("tau_bar", self.tau_bar),
            ("sigma_bar", self.sigma_bar), ("M", self.M), ("tau", self.tau),
        ]
        return " ".join(f"{k}={v!r}" for k, v in pairs)


@dataclass(frozen=True)
class BridgeResult:
    """Outcome of the continuum-to-lattice bridge."""

    disc: DiscreteParams
    tau: float           # realized period s*tau_bar, slightly below the target
    b: float             # fractional part dropped when flooring tau_bar
    warnings: tuple[str, ...] = field(default=())


def bridge(cont: ContinuumParams, n0: int, sigma_bar: int,
           M: int = 10_000, affinity_layer: bool = True) -> BridgeResult:
    """Derive lattice parameters from a continuum record.

    The lattice spacing is ell = L0/n0 and the time step s = ell**2/(2*D0),
    so the bulk walk has diffusivity D0.  The layer stay probability is
    r = 1 - D1/D0, the period tau_bar = floor((1/mu)*sqrt(sigma_bar/s))
    realizes sigma_tau = (mu*tau)**2 ~ sigma_bar*s, and the layer depth
    n1 = sqrt((1-r)/2) * sqrt(tau_bar) makes the layer width track
    sqrt(D1*tau).

    Parameters
    ----------
    cont : ContinuumParams
        Continuum inputs; ``cont.tau`` is ignored (the period is an
        output here, not an input).
    n0 : int
        Number of bulk sites.
    sigma_bar : int
        Open steps per cycle, >= 1.
    M : int
        Ensemble size.
    affinity_layer : bool
        False builds the no-layer variant (n1 = 0, plain walk); use
        D1 = D0 in that case.

    Returns
    -------
    BridgeResult
        Lattice parameters, the realized period, and the fraction b
        discarded by the floor.
    """
    if n0 < 1:
        raise ValueError("n0 must be >= 1")
    if sigma_bar < 1:
        raise ValueError("sigma_bar must be >= 1")
    ell = cont.L0 / n0
    s = ell * ell / (2.0 * cont.D0)
    r = 1.0 - cont.D1 / cont.D0
    raw = math.sqrt(sigma_bar / s) / cont.mu
    tau_bar = int(math.floor(raw))
    b = raw - tau_bar
    if tau_bar < sigma_bar:
        raise ValueError(
            f"tau_bar={tau_bar} < sigma_bar={sigma_bar}; "
            "decrease sigma_bar or refine the lattice"
        )
    if affinity_layer:
        n1 = max(1, round(math.sqrt((1.0 - r) / 2.0) * math.sqrt(tau_bar)))
    else:
        n1 = 0
    disc = DiscreteParams(n0=n0, n1=n1, ell=ell, s=s, r=r,
                          tau_bar=tau_bar, sigma_bar=sigma_bar, M=M)
    return BridgeResult(disc=disc, tau=disc.tau, b=b,
                        warnings=tuple(disc.validity_warnings()))
