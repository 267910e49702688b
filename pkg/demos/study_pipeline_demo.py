"""Desk-scale run of both simulation studies.

Study 1 samples curved-ERGM networks by MCMC and tracks how the worst
per-bin error of three empirical distributions shrinks with network
size. Study 2 does the same for the beta-model with node heterogeneity
controlled by alpha. Replication counts here are small so the script
finishes in seconds; raise them for smoother medians.

Run: python3 demos/study_pipeline_demo.py
"""

import numpy as np

from netconc import stats, studies

cfg1 = studies.StudyConfig(
    "study1", n_list=(15, 30), replications=40,
    theta_star_samples=200, master_seed=7,
)
res1 = studies.run_study1(cfg1)
print("study 1 median l-infinity errors")
for kind in (stats.DEGREE, stats.ESP, stats.GEODESIC):
    meds = [float(np.median(res1.errors(n=n, kind=kind))) for n in cfg1.n_list]
    print(f"  {kind:10s} " + "  ".join(f"N={n}: {m:.4f}"
                                       for n, m in zip(cfg1.n_list, meds)))

cfg2 = studies.StudyConfig(
    "study2", n_list=(10, 25, 50), replications=60,
    theta_star_samples=400, alpha_list=(0.0, 0.25), master_seed=7,
)
res2 = studies.run_study2(cfg2)
print("\nstudy 2 median degree errors and expected-degree slopes")
for alpha in cfg2.alpha_list:
    meds = [float(np.median(res2.errors(n=n, alpha=alpha, kind=stats.DEGREE)))
            for n in cfg2.n_list]
    slope = studies.expected_degree_slope(res2, alpha)
    print(f"  alpha={alpha}: medians "
          + "  ".join(f"{m:.4f}" for m in meds)
          + f"  slope {slope:.3f}")
