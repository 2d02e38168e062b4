"""Flux-ratio estimation from per-cycle tallies.

Each gate cycle i yields an absorbed count F_i and a sensor-site
occupation count U_i.  The per-cycle ratio k_i = F_i / U_i, rescaled by
ell / s, estimates the continuum flux-to-density ratio K.  Cycles are
screened before averaging: an initial burn-in is dropped, cycles whose
surviving population is too small are dropped, and cycles with U_i = 0
carry no density signal and are skipped (or rejected, by policy).

The small-tau limit of K is recovered by fitting K against realized tau
over a sweep and reading off the intercept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .engine import RunResult

__all__ = [
    "EstimatorConfig",
    "KEstimate",
    "SweepFit",
    "SweepRow",
    "estimate_K",
    "sweep_convergence",
    "write_sweep_csv",
    "read_sweep_csv",
    "write_gnuplot_dat",
    "SWEEP_HEADER",
]


@dataclass(frozen=True)
class EstimatorConfig:
    """Screening policy applied to per-cycle tallies before averaging.

    min_population=None resolves to max(M // 100, 100) at estimation
    time, so the default scales with ensemble size.
    """

    burn_in_fraction: float = 0.1
    min_population: int | None = None
    zero_U_policy: str = "skip"

    def __post_init__(self):
        if not 0.0 <= self.burn_in_fraction < 1.0:
            raise ValueError(
                f"burn_in_fraction must be in [0, 1), got {self.burn_in_fraction}"
            )
        if self.min_population is not None and self.min_population < 0:
            raise ValueError("min_population must be >= 0")
        if self.zero_U_policy not in ("skip", "error"):
            raise ValueError(
                f"zero_U_policy must be 'skip' or 'error', got {self.zero_U_policy!r}"
            )

    def resolve_min_population(self, M: int) -> int:
        if self.min_population is not None:
            return self.min_population
        return max(M // 100, 100)


@dataclass(frozen=True)
class KEstimate:
    K: float
    stderr: float
    cycles_used: int
    cycles_total: int
    k_values: np.ndarray = field(repr=False)

    def __str__(self):
        return (
            f"K = {self.K:.6g} +/- {self.stderr:.2g} "
            f"({self.cycles_used}/{self.cycles_total} cycles)"
        )


def estimate_K(result: RunResult, config: EstimatorConfig | None = None) -> KEstimate:
    """Estimate K = (ell/s) * mean(F_i / U_i) over screened cycles.

    Raises ValueError when fewer than 3 cycles survive screening; the
    estimate would then have no meaningful spread.
    """
    if config is None:
        config = EstimatorConfig()
    F = np.asarray(result.F, dtype=np.int64)
    U = np.asarray(result.U, dtype=np.int64)
    residual = np.asarray(result.residual, dtype=np.int64)
    n = len(F)
    if n == 0:
        raise ValueError("run produced no cycles")

    keep = np.ones(n, dtype=bool)
    burn = math.ceil(config.burn_in_fraction * n)
    keep[:burn] = False
    min_pop = config.resolve_min_population(result.disc.M)
    keep &= residual >= min_pop
    zero_u = U == 0
    if config.zero_U_policy == "error" and np.any(zero_u & keep):
        raise ValueError("cycle with U = 0 encountered under zero_U_policy='error'")
    keep &= ~zero_u

    m = int(keep.sum())
    if m < 3:
        raise ValueError(
            f"only {m} cycles survive screening (burn-in {burn}, "
            f"min population {min_pop}); need at least 3"
        )
    scale = result.disc.ell / result.disc.s
    k = F[keep] / U[keep]
    K = scale * float(k.mean())
    stderr = scale * float(k.std(ddof=1)) / math.sqrt(m)
    return KEstimate(K=K, stderr=stderr, cycles_used=m, cycles_total=n,
                     k_values=scale * k)


@dataclass(frozen=True)
class SweepFit:
    intercept: float
    slope: float
    residuals: np.ndarray = field(repr=False)

    def predicted(self, tau):
        return self.intercept + self.slope * np.asarray(tau, dtype=float)


def sweep_convergence(taus, Ks) -> SweepFit:
    """Unweighted least-squares line K(tau); intercept is the tau -> 0 limit.

    Needs at least 3 distinct tau values so the fit is overdetermined.
    """
    taus = np.asarray(taus, dtype=float)
    Ks = np.asarray(Ks, dtype=float)
    if taus.shape != Ks.shape or taus.ndim != 1:
        raise ValueError("taus and Ks must be 1-d arrays of equal length")
    if len(np.unique(taus)) < 3:
        raise ValueError(
            f"need at least 3 distinct tau values, got {len(np.unique(taus))}"
        )
    A = np.column_stack([np.ones_like(taus), taus])
    coeffs, *_ = np.linalg.lstsq(A, Ks, rcond=None)
    intercept, slope = float(coeffs[0]), float(coeffs[1])
    residuals = Ks - (intercept + slope * taus)
    return SweepFit(intercept=intercept, slope=slope, residuals=residuals)


# ---------------------------------------------------------------------------
# sweep tables


SWEEP_HEADER = "n0,tau,sigma_bar,D1,K,stderr,cycles_used"


@dataclass(frozen=True)
class SweepRow:
    n0: int
    tau: float
    sigma_bar: int
    D1: float
    K: float
    stderr: float
    cycles_used: int


def write_sweep_csv(path, rows) -> None:
    lines = [SWEEP_HEADER]
    for r in rows:
        lines.append(
            f"{r.n0},{r.tau!r},{r.sigma_bar},{r.D1!r},"
            f"{r.K!r},{r.stderr!r},{r.cycles_used}"
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_sweep_csv(path) -> list[SweepRow]:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != SWEEP_HEADER:
            raise ValueError(f"unexpected sweep CSV header: {header}")
        out = []
        for line in fh:
            n0, tau, sb, d1, k, se, cu = line.strip().split(",")
            out.append(SweepRow(
                n0=int(n0), tau=float(tau), sigma_bar=int(sb), D1=float(d1),
                K=float(k), stderr=float(se), cycles_used=int(cu),
            ))
        return out


def write_gnuplot_dat(path, rows) -> None:
    """Two-column (tau, K) table, one row per sweep point."""
    with open(path, "w") as fh:
        fh.write("# tau K\n")
        for r in rows:
            fh.write(f"{r.tau!r} {r.K!r}\n")
