"""One gated run, cycle by cycle.

Each gate period contributes a flux tally F_i (walkers absorbed while
open) and a density tally U_i (visits to the sampling site).  Their
ratio, rescaled by ell/s, estimates the flux-to-density coefficient K.
Early cycles are biased by the closed-gate start, which is why the
estimator drops a burn-in fraction.
"""

from gatedpore import (
    ContinuumParams,
    EstimatorConfig,
    bridge,
    estimate_K,
    k_theory,
    run,
)

SEED = 7
N0 = 1000
SIGMA_BAR = 500
D1 = 0.1


def main():
    cont = ContinuumParams(L0=1.0, D0=1.0, D1=D1, mu=1.0)
    br = bridge(cont, N0, SIGMA_BAR, M=10_000)
    d = br.disc
    print(f"lattice n0={d.n0} n1={d.n1} r={d.r:.2f} "
          f"tau_bar={d.tau_bar} sigma_bar={d.sigma_bar}, "
          f"period tau={br.tau:.5f}")

    res = run(d, cycles=40, seed=SEED)
    scale = d.ell / d.s
    print("\ncycle     F_i      U_i   alive   scaled F/U")
    for i in range(0, 40, 4):
        k_i = scale * res.F[i] / res.U[i] if res.U[i] else float("nan")
        print(f"{i:>5} {res.F[i]:>7} {res.U[i]:>8} {res.residual[i]:>7} "
              f"{k_i:>12.4f}")

    est = estimate_K(res, EstimatorConfig(burn_in_fraction=0.1))
    ref = k_theory(cont.mu, cont.D0, cont.D1)
    print(f"\nK = {est.K:.4f} +/- {est.stderr:.4f} "
          f"({est.cycles_used}/{est.cycles_total} cycles kept)")
    print(f"theory at tau -> 0: {ref:.4f} "
          f"(single-period runs sit below it; the sweep demo "
          "extrapolates away the gap)")


if __name__ == "__main__":
    main()
