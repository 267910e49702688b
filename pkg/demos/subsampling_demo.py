"""Block subsampling on a synthetic classroom network.

Generates a directed network of within-class friendships, subsamples K
classes at a time, and shows how the l-infinity error of the
within-block out-degree distribution concentrates as K grows. Writes a
boxplot of the errors to subsample_demo.svg.

Run: python3 demos/subsampling_demo.py
"""

import numpy as np

from netconc import models, studies

g, blocks, respondents = studies.generate_synthetic_classes(
    60, 15, 33, 0.87, models.replicate_rng(11, "demo")
)
print(f"{blocks.n_blocks} classes, {g.n} students, "
      f"{len(respondents)} respondents, {g.edge_count} edges")

cfg = studies.StudyConfig(
    "subsample", replications=200, k_list=(1, 5, 15, 30, 60), master_seed=11
)
result = studies.run_subsample(g, blocks, respondents, cfg)
for k in cfg.k_list:
    errs = result.errors(k=k)
    print(f"  K={k:3d}  median {np.median(errs):.4f}  "
          f"IQR {np.subtract(*np.percentile(errs, [75, 25])):.4f}")

svg = studies.emit_svg_boxplot(
    result.to_csv(), "K", "linf_error",
    title="within-block out-degree error by number of sampled classes",
)
with open("subsample_demo.svg", "w") as fh:
    fh.write(svg)
print("wrote subsample_demo.svg")
