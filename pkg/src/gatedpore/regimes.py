"""Asymptotic regime classification for periodically gated pores.

Pore width, opening duration, and the layer diffusivity are modelled
as power laws c * tau**a of the gating period tau.  As tau -> 0 the
membrane condition seen by the bulk depends on two things: whether the
pore half-width outruns the diffusive spread accumulated during one
opening (the ratio sigma_eps / sqrt(D1 * sigma_tau), "fast" when it
blows up, "small" when it stays bounded), and the limit l of a
rate functional specific to that case and to the species.  A finite
positive l yields a Robin condition with coefficient rho; l = 0
degenerates to a no-flux wall and l = inf to full absorption.

The non-selected species ("Na") ignores the affinity layer, which
formally sets D1 = 1 in the dichotomy and drops it from the rate.
Everything here is exponent-and-coefficient arithmetic on power laws,
so classification is exact up to float rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = [
    "PowerLaw",
    "ScalingFamily",
    "PoreGeometry",
    "RegimeReport",
    "Rho1D",
    "classify",
    "rho",
    "rho_1d",
    "effective_ratio",
    "TAU",
    "FAST",
    "SMALL",
    "NEUMANN",
    "DIRICHLET",
    "POTASSIUM",
    "SODIUM",
]

SQRT_PI = math.sqrt(math.pi)

# exponents equal to zero within this tolerance count as critical;
# float arithmetic on the user's exponents cannot do better anyway
EXPONENT_TOL = 1e-12

FAST = "fast"
SMALL = "small"
NEUMANN = "degenerate-neumann"
DIRICHLET = "degenerate-dirichlet"

POTASSIUM = "K"
SODIUM = "Na"

_SPECIES = (POTASSIUM, SODIUM)


@dataclass(frozen=True)
class PowerLaw:
    """One term c * tau**a with c > 0."""

    coefficient: float
    exponent: float

    def __post_init__(self):
        if not (math.isfinite(self.coefficient) and self.coefficient > 0):
            raise ValueError(f"coefficient must be positive, got {self.coefficient}")
        if not math.isfinite(self.exponent):
            raise ValueError(f"exponent must be finite, got {self.exponent}")

    def __call__(self, tau: float) -> float:
        return self.coefficient * tau ** self.exponent

    def __mul__(self, other: "PowerLaw") -> "PowerLaw":
        return PowerLaw(self.coefficient * other.coefficient,
                        self.exponent + other.exponent)

    def __truediv__(self, other: "PowerLaw") -> "PowerLaw":
        return PowerLaw(self.coefficient / other.coefficient,
                        self.exponent - other.exponent)

    def sqrt(self) -> "PowerLaw":
        return PowerLaw(math.sqrt(self.coefficient), self.exponent / 2.0)

    def power(self, k: float) -> "PowerLaw":
        return PowerLaw(self.coefficient ** k, self.exponent * k)

    def limit(self) -> float:
        """Value as tau -> 0+: 0, the coefficient, or inf."""
        if self.exponent > EXPONENT_TOL:
            return 0.0
        if self.exponent < -EXPONENT_TOL:
            return math.inf
        return self.coefficient


TAU = PowerLaw(1.0, 1.0)

_UNIT = PowerLaw(1.0, 0.0)


@dataclass(frozen=True)
class ScalingFamily:
    """Gate parameters as power laws of the period, plus the dimension.

    eps is the pore spacing, sigma_eps the pore half-width, sigma_tau
    the opening duration, D1 the layer diffusivity.  All the length
    and time scales vanish with tau; D1 may instead be constant
    (exponent 0).  Openings cannot outlast the period, which for power
    laws means exponent > 1, or exponent 1 with coefficient <= 1.
    """

    eps: PowerLaw
    sigma_eps: PowerLaw
    sigma_tau: PowerLaw
    D1: PowerLaw
    N: int

    def __post_init__(self):
        for name in ("eps", "sigma_eps", "sigma_tau"):
            if getattr(self, name).exponent <= 0:
                raise ValueError(f"{name} must vanish as tau -> 0 "
                                 f"(exponent > 0)")
        if self.D1.exponent < 0:
            raise ValueError("D1 must not blow up as tau -> 0")
        st = self.sigma_tau
        if st.exponent < 1 or (st.exponent == 1 and st.coefficient > 1):
            raise ValueError("sigma_tau must satisfy sigma_tau <= tau "
                             "for small tau")
        if self.N < 2:
            raise ValueError(f"dimension N must be >= 2, got {self.N}")

    def width_to_spread(self, species: str) -> PowerLaw:
        """The dichotomy ratio sigma_eps / sqrt(D1 * sigma_tau)."""
        _check_species(species)
        D1 = self.D1 if species == POTASSIUM else _UNIT
        return self.sigma_eps / (D1 * self.sigma_tau).sqrt()

    def rate_law(self, species: str, case: str) -> PowerLaw:
        """The per-period absorption rate whose tau -> 0 limit is l."""
        _check_species(species)
        aspect = (self.sigma_eps / self.eps).power(self.N - 1)
        if case == FAST:
            base = self.sigma_tau.sqrt() / TAU
            if species == POTASSIUM:
                base = base / self.D1.sqrt()
            return base * aspect
        if case == SMALL:
            return ((self.sigma_tau / TAU)
                    * self.sigma_eps.power(self.N - 2)
                    / self.eps.power(self.N - 1))
        raise ValueError(f"case must be {FAST!r} or {SMALL!r}, got {case!r}")


@dataclass(frozen=True)
class PoreGeometry:
    """Reference pore data: cross-section measure, capacity constant,
    and the total pore density over the interface."""

    measure_P0: float
    Phi: float
    M_total: float
    N: int | None = None

    def __post_init__(self):
        for name in ("measure_P0", "Phi", "M_total"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v}")
        if self.N is not None and self.measure_P0 > 2.0 ** (self.N - 1):
            raise ValueError(
                f"measure_P0 = {self.measure_P0} exceeds the unit-cell "
                f"bound 2**(N-1) = {2.0 ** (self.N - 1)}")


@dataclass(frozen=True)
class RegimeReport:
    species: str
    case: str          # fast | small dichotomy
    regime: str        # case label, or degenerate-* when l is 0 or inf
    l: float
    law: PowerLaw      # the rate law whose limit is l
    rho: float | None = None

    def with_rho(self, geom: PoreGeometry, D0: float) -> "RegimeReport":
        """Attach the membrane coefficient: 0 for a no-flux limit,
        inf for full absorption, the Robin constant otherwise."""
        if self.regime == NEUMANN:
            value = 0.0
        elif self.regime == DIRICHLET:
            value = math.inf
        else:
            value = rho(self.regime, self.species, self.l, geom, D0)
        return replace(self, rho=value)

    def lines(self) -> list[str]:
        out = [
            f"species={self.species}",
            f"case={self.case}",
            f"regime={self.regime}",
            f"l={self.l!r}",
            f"rate_coefficient={self.law.coefficient!r}",
            f"rate_exponent={self.law.exponent!r}",
        ]
        if self.rho is not None:
            out.append(f"rho={self.rho!r}")
        return out


def _check_species(species: str) -> None:
    if species not in _SPECIES:
        raise ValueError(f"species must be one of {_SPECIES}, got {species!r}")


def classify(fam: ScalingFamily, species: str, *,
             require_critical_scaling: bool = False) -> RegimeReport:
    """Decide the asymptotic regime of a scaling family for one species.

    With ``require_critical_scaling`` the family must couple spacing to
    layer spread as eps = c0 * sqrt(D1 * tau) with D1 / tau -> inf,
    the assumption under which the Robin limit is proved.
    """
    _check_species(species)
    if require_critical_scaling:
        want = (1.0 + fam.D1.exponent) / 2.0
        if abs(fam.eps.exponent - want) > EXPONENT_TOL:
            raise ValueError(
                f"critical scaling needs eps exponent {want}, "
                f"got {fam.eps.exponent}")
        if fam.D1.exponent >= 1.0:
            raise ValueError(
                "critical scaling needs D1 / tau -> inf "
                f"(D1 exponent < 1, got {fam.D1.exponent})")
    ratio = fam.width_to_spread(species)
    # a blowing-up ratio needs a negative exponent; at exponent zero the
    # ratio tends to its coefficient, which is bounded
    case = FAST if ratio.exponent < -EXPONENT_TOL else SMALL
    law = fam.rate_law(species, case)
    l = law.limit()
    if l == 0.0:
        regime = NEUMANN
    elif math.isinf(l):
        regime = DIRICHLET
    else:
        regime = case
    return RegimeReport(species=species, case=case, regime=regime,
                        l=l, law=law)


def rho(regime: str, species: str, l: float, geom: PoreGeometry,
        D0: float) -> float:
    """Robin coefficient for a finite-positive limit l.

    fast:  (2/sqrt(pi)) * |P0| * l, divided by sqrt(D0) for the
    non-selected species; small: Phi * l for either species.
    """
    _check_species(species)
    if regime not in (FAST, SMALL):
        raise ValueError(
            f"degenerate regime {regime!r} carries no Robin constant")
    if not (math.isfinite(l) and l > 0):
        raise ValueError(f"need finite positive l, got {l}")
    if not (math.isfinite(D0) and D0 > 0):
        raise ValueError(f"D0 must be positive, got {D0}")
    if regime == FAST:
        value = (2.0 / SQRT_PI) * geom.measure_P0 * l
        if species == SODIUM:
            value /= math.sqrt(D0)
        return value
    return geom.Phi * l


@dataclass(frozen=True)
class Rho1D:
    """One-dimensional membrane constant and its regime tag."""

    l: float
    rho1: float
    regime: str


def rho_1d(l_1K: float) -> Rho1D:
    """Effective boundary constant of the single-pore problem.

    The rate limit here is l = lim sqrt(sigma_tau) / tau; finite
    positive values give rho1 = (2/sqrt(pi)) * l, the degenerate ends
    give a wall (l = 0) or a perfect sink (l = inf).
    """
    if math.isnan(l_1K) or l_1K < 0:
        raise ValueError(f"l must lie in [0, inf], got {l_1K}")
    if l_1K == 0.0:
        return Rho1D(l=0.0, rho1=0.0, regime=NEUMANN)
    if math.isinf(l_1K):
        return Rho1D(l=math.inf, rho1=math.inf, regime=DIRICHLET)
    return Rho1D(l=l_1K, rho1=(2.0 / SQRT_PI) * l_1K, regime=FAST)


def effective_ratio(rho1: float, D0: float, D1: float) -> float:
    """Flux-to-density ratio rho1 * D0 / sqrt(D1) at the gated end.

    For the species that ignores the layer, pass D1 = D0; the ratio
    collapses to rho1 * sqrt(D0), and the selected-to-non-selected
    quotient becomes sqrt(D0 / D1).
    """
    if not (D0 > 0 and D1 > 0):
        raise ValueError("D0 and D1 must be positive")
    return rho1 * D0 / math.sqrt(D1)
