"""Full-scale network-type study (N=1000/1024, 3 repetitions).

Long-running: hours on a small machine. Desk-scale equivalents run in the
acceptance suite; this script exists to reproduce the full-size numbers
(ER ~0.72, Forest Fire ~0.97, Core-Periphery ~0.76, Hierarchical ~0.97).
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cascadebayes.experiments import ChainScale, ExperimentSpec, named_generator, run_synthetic_experiment


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="runs/full_network_types")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--repetitions", type=int, default=3)
    parser.add_argument("--chains", type=int, default=16)
    parser.add_argument("--steps-factor", type=float, default=100.0)
    args = parser.parse_args()
    generators = tuple(
        (name, named_generator(name, 1024 if name in ("core_periphery", "hierarchical") else 1000))
        for name in ("erdos_renyi", "forest_fire", "core_periphery", "hierarchical")
    )
    spec = ExperimentSpec(
        generators=generators,
        f_grid=(0.9,),
        beta=0.4,
        repetitions=args.repetitions,
        seed=args.seed,
        scale=ChainScale(steps_factor=args.steps_factor, n_chains=args.chains),
        workers=args.workers,
    )
    rows = run_synthetic_experiment(spec, out_dir=args.out)
    for row in rows:
        print(
            f"{row['network']:16s} rep={row['rep']} auc={row['auc']:.3f} "
            f"fpa={row['fpa']:.3f} cascades={row['cascades']} {row['seconds']:.0f}s"
        )


if __name__ == "__main__":
    main()
