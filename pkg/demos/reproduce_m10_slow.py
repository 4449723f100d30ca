"""Certify the 4032-vector frame in R^10 (roughly an hour of compute).

This is the largest documented reproduction and is deliberately not part
of the test suite.  The frame is the signed-permutation orbit of the
vector with ten entries, five of them 1/sqrt(5), giving N = 4032 unit
vectors in R^10.  With eps = 1/2 the level search settles on L = 23,
a 64512240-point step net, and a few million points after pruning.
Sweeping them certifies that any K = 2883 of the 4032 vectors form a
frame for R^10.  For scale, the number of such subsets is C(4032,2883),
on the order of 10^1044, so exhaustive checking is out of the question.

Run:  python demos/reproduce_m10_slow.py
Expect on the order of an hour on a laptop; progress is printed every
hundred thousand net points.  Thread count comes from NERF_CERT_THREADS
or the CPU count.
"""

import time

from nerfcert import (
    GeneratorSpec,
    NetConfig,
    certify,
    min_spanning_K,
    orbit_signed_permutations,
    sweep_all_K,
)


def main():
    frame = orbit_signed_permutations(GeneratorSpec(10, 5))
    config = NetConfig.create(10, 0.25)
    print(f"frame: 10 x {frame.N}; net: L = {config.L}, "
          f"{config.cardinality} step points before pruning")

    t0 = time.perf_counter()
    table = certify(
        sweep_all_K(frame, config, threads=0, progress=True),
        cap_mode="untf",
    )
    print(f"sweep of {table.net_points_used} pruned points took "
          f"{time.perf_counter() - t0:.0f} s")

    k = min_spanning_K(table)
    print(f"\nany {k} of the {frame.N} vectors span R^10")
    print(f"certified lower bound at K = 2883: "
          f"{table.alpha_lower[2882]:.4f}")


if __name__ == "__main__":
    main()
