#!/usr/bin/env python3
"""A small accuracy/timing sweep, written to CSV and summarized.

Each row of the sweep is an independent (size, seed) run: a synthetic
problem with a pinned spectral gap is solved exactly and with the randomized
solver, and the accuracy gaps plus minimum-of-3 wall times are recorded.
Every row can be reproduced later from its seed column alone.

The full-scale experiment lives behind `trunclsq bench`; this demo keeps the
sizes small so it finishes in seconds.

Run:  python3 demos/benchmark_csv.py
"""

import math
import tempfile
from pathlib import Path

from trunclsq import RngSeed, run_experiment


def main() -> None:
    report = run_experiment(
        n_values=[60, 120, 180],
        k=8,
        p_rule=lambda n: math.ceil(2 * math.log(n)),
        gamma_target=0.9,
        seeds_per_n=5,
        base_seed=RngSeed(2024),
    )

    path = Path(tempfile.gettempdir()) / "trunclsq_demo_sweep.csv"
    report.write_csv(path)
    print(f"{len(report.rows)} rows written to {path}\n")

    objective = report.median_by_n("objective_error")
    solution = report.median_by_n("solution_error")
    exact_ms = {n: v * 1e3 for n, v in report.median_by_n("time_exact_s").items()}
    approx_ms = {n: v * 1e3 for n, v in report.median_by_n("time_approx_s").items()}

    header = (
        f"{'n':>6} {'median obj err':>16} {'median sol err':>16} "
        f"{'exact ms':>10} {'sketch ms':>10}"
    )
    print(header)
    print("-" * len(header))
    for n in sorted(objective):
        print(
            f"{n:>6} {objective[n]:>16.4f} {solution[n]:>16.4f} "
            f"{exact_ms[n]:>10.2f} {approx_ms[n]:>10.2f}"
        )

    failed = [row for row in report.rows if row.error is not None]
    print(f"\nfailed rows: {len(failed)}")
    print("re-run any single row from its CSV seed, e.g.:")
    row = report.rows[0]
    print(
        f"  recompute_row_metrics(ReportRow(n={row.n}, k={row.k}, p={row.p}, "
        f"seed={row.seed}, ...), gamma_target=0.9)"
    )


if __name__ == "__main__":
    main()
