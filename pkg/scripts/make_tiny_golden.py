"""Regenerate the bundled tiny example and its exact golden marginals.

The golden file is computed by full enumeration over all graphs (the
brute-force likelihood path), so chain output can be checked against it.
"""

import csv
import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cascadebayes.cascades import Cascade, save_cascades
from cascadebayes.exact import exact_posterior
from cascadebayes.graphs import DIRECTED
from cascadebayes.likelihood import ModelParams

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "tiny")

BETA = 0.5
PRIOR_P = 0.3
CASCADES = [
    Cascade(0, [0, 1, 2], [0.0, 0.7, 1.5]),
    Cascade(1, [1, 2], [0.0, 0.4]),
]


def main():
    os.makedirs(OUT, exist_ok=True)
    save_cascades(CASCADES, os.path.join(OUT, "cascades.csv"))
    ex = exact_posterior(CASCADES, 3, DIRECTED, ModelParams(BETA), PRIOR_P)
    with open(os.path.join(OUT, "golden_marginals.csv"), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["i", "j", "q"])
        for i, j in ex.dyads:
            writer.writerow([i, j, repr(float(ex.marginals[i, j]))])
    config = {
        "seed": 12,
        "mode": "directed",
        "out": "runs/tiny",
        "infer": {
            "beta": BETA,
            "alpha": 1.0,
            "prior_p": PRIOR_P,
            "iterations": 200_000,
            "burn_in": 20_000,
            "thinning": 2,
            "chains": 4,
        },
        "paths": {"cascades": os.path.join("data", "tiny", "cascades.csv")},
    }
    with open(os.path.join(OUT, "infer_config.json"), "w") as fh:
        json.dump(config, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print("wrote", OUT)


if __name__ == "__main__":
    main()
