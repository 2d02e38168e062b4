"""Continuum solvers for the gated-pore problem and its effective limit.

The transported density u obeys u_t - (D(x) u)_xx = 0 on [0, a] with a
reflecting left end.  D(x) drops from D0 to D1 on the thin layer
(a - delta, a] behind the gate, which makes u itself discontinuous at
the interface; the product v = D(x) u stays continuous along with its
flux, so all schemes here advance v.  In v the equation reads
v_t = D(x) v_xx and the finite-volume form (1/D) v_t = v_xx conserves
the discrete mass sum(w_j v_j / D_j) exactly while the gate is shut.

Backward Euler gives an M-matrix for either gate phase, hence an exact
discrete maximum principle 0 <= v <= D0 * u0 for constant initial
data.  The gate alternates a zero-density (open) and a zero-flux
(closed) right end on a fixed step grid: the open window is resolved
by n_open steps and the period snaps to a whole number of steps.

The effective description replaces gate and layer with a radiation
condition at x = a whose coefficient is the flux-to-density ratio
rho_eff; `solve_robin` integrates it on the bulk interval alone, and
`convergence_study` measures the space-time L2 distance between the
two descriptions as the period shrinks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .params import ContinuumParams, k_theory

__all__ = [
    "GridSpec",
    "GateClock",
    "Field1D",
    "AlternatingResult",
    "RobinResult",
    "StudyResult",
    "solve_alternating",
    "solve_robin",
    "robin_ratio_richardson",
    "convergence_study",
]


@dataclass(frozen=True)
class GridSpec:
    """Two-block mesh and time resolution.

    J0 cells of width L0/J0 cover the bulk, m cells of width delta/m
    cover the layer; the interface sits exactly on node J0.  The open
    window is cut into n_open implicit steps.
    """

    J0: int = 256
    m: int = 8
    n_open: int = 8

    def __post_init__(self):
        if self.J0 < 8:
            raise ValueError(f"need at least 8 bulk cells, got {self.J0}")
        if self.m < 8:
            raise ValueError(f"layer must be resolved by >= 8 cells, got {self.m}")
        if self.n_open < 8:
            raise ValueError(
                f"open window must be resolved by >= 8 steps, got {self.n_open}")


@dataclass(frozen=True)
class GateClock:
    """Open/closed schedule: the first sigma_tau of each period is open."""

    tau: float
    sigma_tau: float

    def __post_init__(self):
        if not 0.0 <= self.sigma_tau <= self.tau:
            raise ValueError(
                f"need 0 <= sigma_tau <= tau, got {self.sigma_tau} vs {self.tau}")

    def is_open(self, t: float) -> bool:
        if self.sigma_tau == 0.0:
            return False
        # fuzz keeps step-boundary times from flipping phase by roundoff
        return math.fmod(t, self.tau) < self.sigma_tau - 1e-9 * self.tau


@dataclass
class Field1D:
    """Nodal values of v = D u at one instant, on the two-block grid."""

    x: np.ndarray
    v: np.ndarray
    iface: int           # node index sitting on the interface
    D0: float
    D1: float
    t: float

    @property
    def u_bulk(self) -> np.ndarray:
        """u on the bulk nodes 0..iface, interface taken from the bulk side."""
        return self.v[: self.iface + 1] / self.D0

    @property
    def u_layer(self) -> np.ndarray:
        """u on the layer nodes iface..end, interface from the layer side."""
        return self.v[self.iface:] / self.D1

    def check_bounds(self, vmax: float, tol: float = 1e-10) -> None:
        slack = tol * max(vmax, 1.0)
        lo, hi = float(self.v.min()), float(self.v.max())
        if lo < -slack or hi > vmax + slack:
            raise ValueError(
                f"maximum principle violated at t={self.t}: "
                f"v in [{lo}, {hi}] vs [0, {vmax}]")


def _weights(J0: int, m: int, h0: float, h1: float,
             D0: float, D1: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-node mass weights w_j/D_j and edge conductances 1/h."""
    n = J0 + m + 1
    wc = np.empty(n)
    for j in range(n):
        left = h0 / (2 * D0) if 0 < j <= J0 else (h1 / (2 * D1) if j > 0 else 0.0)
        right = h0 / (2 * D0) if j < J0 else (h1 / (2 * D1) if j < n - 1 else 0.0)
        wc[j] = left + right
    g = np.where(np.arange(n - 1) < J0, 1.0 / h0, 1.0 / h1)
    return wc, g


def _laplacian(wc: np.ndarray, g: np.ndarray, dt: float) -> sp.csc_matrix:
    """Backward-Euler system matrix diag(wc) - dt*L in flux form."""
    n = len(wc)
    main = wc.copy()
    lower = np.zeros(n - 1)
    upper = np.zeros(n - 1)
    main[:-1] += dt * g
    main[1:] += dt * g
    lower -= dt * g
    upper -= dt * g
    return sp.diags([lower, main, upper], [-1, 0, 1], format="csc")


def _dirichlet_last(A: sp.csc_matrix) -> sp.csc_matrix:
    A = A.tolil()
    n = A.shape[0]
    A[n - 1, :] = 0.0
    A[n - 1, n - 1] = 1.0
    return A.tocsc()


@dataclass
class AlternatingResult:
    cont: ContinuumParams
    grid: GridSpec
    x: np.ndarray
    dt: float
    tau_realized: float
    n_cycles: int
    mass: np.ndarray           # per accepted step, mass[0] = initial
    flux: np.ndarray           # outflux at the gate per step (0 when closed)
    cycle_ratio: np.ndarray    # open-phase mean flux over mean bulk density
    final: Field1D
    snapshots: list[Field1D] = field(default_factory=list)
    vmax_bound: float = 0.0
    bulk_u: np.ndarray | None = None   # (steps+1, J0) when recorded

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(len(self.mass))


def solve_alternating(cont: ContinuumParams, grid: GridSpec | None = None,
                      T_final: float | None = None, *, u0: float = 1.0,
                      snapshot_times: tuple[float, ...] = (),
                      check_bounds: bool = True,
                      record_bulk: bool = False) -> AlternatingResult:
    """Integrate the gated problem for a whole number of cycles.

    The period is snapped to a multiple of dt = sigma_tau / n_open and
    the run covers ceil(T_final / tau) cycles.  A permanently closed
    gate (sigma_tau = 0) is allowed and uses dt = T_final / 512.
    """
    if grid is None:
        grid = GridSpec()
    if cont.tau is None or cont.sigma_tau is None:
        raise ValueError("continuum parameters must carry tau and sigma_tau")
    if T_final is None:
        T_final = cont.tau
    if u0 < 0:
        raise ValueError("initial density must be nonnegative")

    L0, D0, D1 = cont.L0, cont.D0, cont.D1
    delta = cont.delta
    h0 = L0 / grid.J0
    h1 = delta / grid.m
    n = grid.J0 + grid.m + 1
    x = np.concatenate([np.linspace(0.0, L0, grid.J0 + 1),
                        L0 + h1 * np.arange(1, grid.m + 1)])
    iface = grid.J0

    if cont.sigma_tau > 0.0:
        dt = cont.sigma_tau / grid.n_open
        n_cycle = max(int(round(cont.tau / dt)), grid.n_open)
        n_open = grid.n_open
    else:
        dt = T_final / 512.0
        n_cycle = 512
        n_open = 0
    tau_real = n_cycle * dt
    n_cycles = max(1, math.ceil(T_final / tau_real))

    wc, g = _weights(grid.J0, grid.m, h0, h1, D0, D1)
    A_closed = _laplacian(wc, g, dt)
    lu_closed = splu(A_closed)
    lu_open = splu(_dirichlet_last(A_closed)) if n_open > 0 else None

    v = np.full(n, u0 * D0)
    v[iface + 1:] = u0 * D1
    # the interface node carries half a cell of each medium; this value
    # makes the initial discrete mass equal the integral of u0 exactly
    v[iface] = u0 * (h0 + h1) / (h0 / D0 + h1 / D1)
    vmax = u0 * D0

    steps_total = n_cycles * n_cycle
    mass = np.empty(steps_total + 1)
    flux = np.zeros(steps_total + 1)
    mass[0] = float(wc @ v)
    cycle_ratio = np.empty(n_cycles)
    snaps: list[Field1D] = []
    want = sorted(snapshot_times)
    bulk = np.empty((steps_total + 1, grid.J0)) if record_bulk else None
    if bulk is not None:
        bulk[0] = v[:grid.J0] / D0

    step = 0
    for cyc in range(n_cycles):
        open_flux = 0.0
        cycle_dens = 0.0
        for k in range(n_cycle):
            is_open = k < n_open
            b = wc * v
            if is_open:
                b[-1] = 0.0
                v = lu_open.solve(b)
                f = (v[-2] - v[-1]) / h1
                open_flux += f
            else:
                v = lu_closed.solve(b)
                f = 0.0
            # the sensor sits on the bulk side of the interface; summing
            # it over the whole cycle mirrors the per-cycle observables
            # of the particle estimator
            cycle_dens += v[iface] / D0
            step += 1
            mass[step] = float(wc @ v)
            flux[step] = f
            if bulk is not None:
                bulk[step] = v[:grid.J0] / D0
            if check_bounds:
                fld = Field1D(x=x, v=v, iface=iface, D0=D0, D1=D1,
                              t=step * dt)
                fld.check_bounds(vmax)
            while want and step * dt >= want[0] - 1e-12:
                snaps.append(Field1D(x=x, v=v.copy(), iface=iface,
                                     D0=D0, D1=D1, t=step * dt))
                want.pop(0)
        cycle_ratio[cyc] = (open_flux / cycle_dens) if cycle_dens > 0 else 0.0

    final = Field1D(x=x, v=v.copy(), iface=iface, D0=D0, D1=D1,
                    t=steps_total * dt)
    return AlternatingResult(
        cont=cont, grid=grid, x=x, dt=dt, tau_realized=tau_real,
        n_cycles=n_cycles, mass=mass, flux=flux, cycle_ratio=cycle_ratio,
        final=final, snapshots=snaps, vmax_bound=vmax, bulk_u=bulk)


@dataclass
class RobinResult:
    L0: float
    D0: float
    rho_eff: float
    x: np.ndarray
    dt: float
    mass: np.ndarray
    w: np.ndarray              # final nodal values of D0*u
    measured_ratio: float      # -D0 w_x / w at x = a, second-order stencil
    bulk_u: np.ndarray | None = None

    @property
    def u(self) -> np.ndarray:
        return self.w / self.D0


def solve_robin(L0: float, D0: float, rho_eff: float, J0: int,
                dt: float, T_final: float, *, u0: float = 1.0,
                record_bulk: bool = False) -> RobinResult:
    """Integrate the effective problem with radiation constant rho_eff.

    Works in w = D0*u: w_t = D0 w_xx on [0, L0], reflecting at 0 and
    -w_x = (rho_eff / D0) w at L0.  rho_eff = 0 reduces to a sealed
    domain and conserves mass.
    """
    if rho_eff < 0:
        raise ValueError("rho_eff must be nonnegative")
    if J0 < 8 or dt <= 0 or T_final <= 0:
        raise ValueError("bad grid or time parameters")
    h = L0 / J0
    n = J0 + 1
    x = np.linspace(0.0, L0, n)
    wc = np.full(n, h / D0)
    wc[0] = wc[-1] = h / (2 * D0)
    g = np.full(n - 1, 1.0 / h)
    A = _laplacian(wc, g, dt).tolil()
    A[n - 1, n - 1] += dt * rho_eff / D0
    lu = splu(A.tocsc())

    w = np.full(n, u0 * D0)
    steps = max(1, int(round(T_final / dt)))
    mass = np.empty(steps + 1)
    mass[0] = float(wc @ w)
    bulk = np.empty((steps + 1, J0)) if record_bulk else None
    if bulk is not None:
        bulk[0] = w[:J0] / D0
    for s in range(steps):
        w = lu.solve(wc * w)
        mass[s + 1] = float(wc @ w)
        if bulk is not None:
            bulk[s + 1] = w[:J0] / D0
    wx = (3.0 * w[-1] - 4.0 * w[-2] + w[-3]) / (2.0 * h)
    ratio = -D0 * wx / w[-1] if w[-1] > 0 else math.inf
    return RobinResult(L0=L0, D0=D0, rho_eff=rho_eff, x=x, dt=dt,
                       mass=mass, w=w, measured_ratio=ratio, bulk_u=bulk)


def robin_ratio_richardson(L0: float, D0: float, rho_eff: float, J0: int,
                           dt: float, T_final: float) -> float:
    """Boundary ratio extrapolated from meshes J0 and 2*J0.

    The scheme is second order in h (measured error quarters per mesh
    halving), so the h -> 0 limit is (4*f(h/2) - f(h)) / 3.
    """
    coarse = solve_robin(L0, D0, rho_eff, J0, dt, T_final).measured_ratio
    fine = solve_robin(L0, D0, rho_eff, 2 * J0, dt, T_final).measured_ratio
    return (4.0 * fine - coarse) / 3.0


@dataclass
class StudyResult:
    taus: np.ndarray
    distances: np.ndarray      # space-time L2 over the shared bulk block
    ratios: np.ndarray         # final-cycle flux-to-density ratio
    rho_eff: float


def convergence_study(cont: ContinuumParams, halvings: int = 5,
                      grid: GridSpec | None = None,
                      T_final: float = 0.5,
                      rho_eff: float | None = None) -> StudyResult:
    """Distance between the gated and effective descriptions along a
    period-halving sequence tau0 * 2**-k, k = 0 .. halvings-1.

    Each gated run uses sigma_tau = mu**2 tau**2 and layer width
    sqrt(D1 tau); the effective run shares the bulk mesh and the step
    grid, and the L2 norm covers the bulk block without the interface
    node.  rho_eff defaults to the homogenized constant for the
    parameter set.
    """
    if grid is None:
        grid = GridSpec()
    if cont.tau is None:
        raise ValueError("continuum parameters must carry the base period")
    if rho_eff is None:
        rho_eff = k_theory(cont.mu, cont.D0, cont.D1)
    J0 = grid.J0
    h0 = cont.L0 / J0
    # node weights of the bulk block, interface node excluded
    qw = np.full(J0, h0)
    qw[0] = h0 / 2

    taus = cont.tau * 0.5 ** np.arange(halvings)
    dists = np.empty(halvings)
    ratios = np.empty(halvings)
    for k, tau_k in enumerate(taus):
        sig_k = (cont.mu * tau_k) ** 2
        if sig_k > tau_k:
            raise ValueError(f"opening exceeds period at tau={tau_k}")
        cont_k = replace(cont, tau=float(tau_k), sigma_tau=float(sig_k))
        alt = solve_alternating(cont_k, grid, T_final, check_bounds=False,
                                record_bulk=True)
        steps = len(alt.mass) - 1
        rob = solve_robin(cont.L0, cont.D0, rho_eff, J0, alt.dt,
                          steps * alt.dt, record_bulk=True)
        diff = alt.bulk_u[1:] - rob.bulk_u[1:]
        dists[k] = math.sqrt(alt.dt * float(np.sum((diff * diff) @ qw)))
        ratios[k] = alt.cycle_ratio[-1]
    return StudyResult(taus=taus, distances=dists, ratios=ratios,
                       rho_eff=rho_eff)
