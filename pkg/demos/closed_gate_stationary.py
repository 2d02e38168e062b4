"""Sealed gate sanity check: occupancy against the stationary law.

With sigma_bar = 0 the gate never opens and the walk has an explicit
stationary distribution: weight 1 - r on every bulk site, weight 1 on
every layer site.  The lazy layer holds 1/(1-r) times more mass per
site, which is the whole point of the affinity layer.
"""

import numpy as np

from gatedpore import DiscreteParams, closed_stationary, occupancy_profile

SEED = 42


def main():
    disc = DiscreteParams(n0=200, n1=50, ell=1.0, s=1.0, r=0.8,
                          tau_bar=100, sigma_bar=0, M=40_000)
    pi = closed_stationary(disc)
    mean, se = occupancy_profile(disc, steps=400, seed=SEED)

    bulk = slice(0, disc.n0)
    layer = slice(disc.n0, disc.n0 + disc.n1)
    print(f"lattice: n0={disc.n0} bulk sites, n1={disc.n1} layer sites, "
          f"r={disc.r}")
    print(f"stationary per-site mass: bulk {pi[bulk][0]:.6f}, "
          f"layer {pi[layer][0]:.6f} "
          f"(ratio {pi[layer][0] / pi[bulk][0]:.2f}, "
          f"expect {1.0 / (1.0 - disc.r):.2f})")
    print(f"measured   per-site mass: bulk {mean[bulk].mean():.6f}, "
          f"layer {mean[layer].mean():.6f}")

    z = np.abs(mean - pi) / np.maximum(se, 1e-15)
    print(f"worst per-site |z| over {disc.n_sites} sites: {z.max():.2f} "
          "(4 would be suspicious)")


if __name__ == "__main__":
    main()
