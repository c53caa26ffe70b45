#!/usr/bin/env python3
"""Randomized truncated solves versus the exact one, depth by depth.

The sketched solver replaces the full SVD with a few power-iteration passes
on a random k-column probe.  Its accuracy is controlled by the depth p: the
subspace error shrinks geometrically with the spectral gap, so a handful of
passes is usually enough.  `choose_power_depth` picks the smallest depth
that meets an (epsilon, delta) accuracy/confidence target.

Run:  python3 demos/randomized_vs_exact.py
"""

import numpy as np

from trunclsq import (
    RngSeed,
    approx_truncated_solve,
    choose_power_depth,
    exact_truncated_solve,
    synthetic_problem,
)


def main() -> None:
    problem = synthetic_problem(n=300, k=10, gamma_target=0.8, noise=0.2, seed=RngSeed(3))
    A, b, k = problem.A, problem.b, problem.k
    rhs_norm = float(np.linalg.norm(b))

    exact = exact_truncated_solve(A, b, k)
    print(f"problem: n=300, k=10, spectral gap {problem.gap_profile.gamma_k:.2f}")
    print(f"exact truncated residual: {exact.residual_norm:.6f}  "
          f"(solve took {exact.wall_time * 1e3:.1f} ms)\n")

    header = f"{'depth p':>8} {'extra residual / ||b||':>24} {'solution error':>16} {'ms':>8}"
    print(header)
    print("-" * len(header))
    for p in (0, 1, 2, 4, 8):
        approx = approx_truncated_solve(A, b, k, p, RngSeed(99))
        extra = (approx.residual_norm - exact.residual_norm) / rhs_norm
        err = np.linalg.norm(approx.x - exact.x) / np.linalg.norm(exact.x)
        print(f"{p:>8} {extra:>24.2e} {err:>16.2e} {approx.wall_time * 1e3:>8.1f}")

    epsilon, delta = 0.1, 0.1
    chosen = choose_power_depth(epsilon, delta, problem.gap_profile)
    approx = approx_truncated_solve(A, b, k, chosen, RngSeed(99))
    extra = (approx.residual_norm - exact.residual_norm) / rhs_norm
    print(
        f"\nchoose_power_depth(epsilon={epsilon}, delta={delta}) -> p = {chosen}; "
        f"extra residual {extra:.2e} <= {epsilon} as promised."
    )


if __name__ == "__main__":
    main()
