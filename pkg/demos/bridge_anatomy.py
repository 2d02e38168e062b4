"""How a continuum pore description turns into a lattice walk.

The bridge picks, for a target open fraction sigma_bar, the gate period
tau_bar, the layer depth n1 and the layer stay probability r so that
the walk's diffusive limit matches the requested D0, D1 and opening
rate mu.  Refining the bulk (larger n0) shrinks the physical period
tau, which is how the tau -> 0 extrapolation is driven.
"""

from gatedpore import ContinuumParams, bridge, k_theory

MU = 1.0
D0 = 1.0
SIGMA_BAR = 1000


def main():
    print("target constants at mu=1, D0=1:")
    for D1 in (0.1, 0.25, 1.0):
        print(f"  D1={D1:<5} k_theory={k_theory(MU, D0, D1):.6f}")
    print()

    for D1, layer in ((0.1, True), (1.0, False)):
        cont = ContinuumParams(L0=1.0, D0=D0, D1=D1, mu=MU)
        label = f"affinity layer, D1={D1}" if layer else "no layer"
        print(f"{label}, sigma_bar={SIGMA_BAR}:")
        print(f"  {'n0':>5} {'tau_bar':>8} {'n1':>4} {'r':>5} "
              f"{'tau':>10} {'b':>7}")
        for n0 in (500, 1000, 2000, 4000, 8000):
            br = bridge(cont, n0, SIGMA_BAR, M=10_000, affinity_layer=layer)
            d = br.disc
            print(f"  {d.n0:>5} {d.tau_bar:>8} {d.n1:>4} {d.r:>5.2f} "
                  f"{br.tau:>10.6f} {br.b:>7.4f}")
            for w in br.warnings:
                print(f"    note: {w}")
        print("  tau halves with every doubling of n0", end="")
        if layer:
            print("; the layer depth grows")
            print("  like sqrt(tau_bar) to keep its physical width.")
        else:
            print(".")
        print()


if __name__ == "__main__":
    main()
