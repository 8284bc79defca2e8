"""Command-line front end wiring generation, simulation, inference, and
evaluation into reproducible pipelines.

Every command reads an optional JSON config, applies flag overrides
(flags win), derives all randomness from one root seed, and emits a
resolved-config copy beside its outputs. Exit codes: 0 success, 2 usage,
3 IO error, 4 validation error, 1 internal error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from .cascades import generate_until_coverage, load_cascades, save_cascades
from .configs import RunConfig, load_config, save_resolved_config
from .evaluation import (
    false_positive_alarm,
    load_marginals,
    marginals_from_counts,
    roc,
    save_marginals,
    save_roc,
)
from .experiments import (
    ChainScale,
    ExperimentSpec,
    SensitivitySpec,
    named_generator,
    run_email_experiment,
    run_sensitivity_sweep,
    run_synthetic_experiment,
)
from .graphs import (
    GeneratorSpec,
    generate_graph,
    load_edge_list,
    save_edge_list,
    save_node_map,
)
from .likelihood import ModelParams, WeightConfig
from .sampler import ChainConfig, PriorConfig, initial_graph, run_parallel_chains
from .seeding import STREAM_CASCADES, STREAM_GRAPH, derive_rng

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VALIDATION = 4


def _resolve(path: str, out_dir: str) -> str:
    """Output location: under the out directory unless absolute."""
    return path if os.path.isabs(path) else os.path.join(out_dir, path)


def _resolve_in(path: str, out_dir: str) -> str:
    """Input location: absolute, else CWD-relative if it exists, else out."""
    if os.path.isabs(path) or os.path.exists(path):
        return path
    return os.path.join(out_dir, path)


def _prepare(args) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out"] = args.out
    if args.mode is not None:
        overrides["mode"] = args.mode
    if args.workers is not None:
        overrides["workers"] = args.workers
    elif config.workers < 1:
        overrides["workers"] = os.cpu_count() or 1
    if overrides:
        config = dataclasses.replace(config, **overrides)
    if getattr(args, "chains", None) is not None:
        config = dataclasses.replace(
            config, infer=dataclasses.replace(config.infer, chains=args.chains)
        )
    os.makedirs(config.out, exist_ok=True)
    save_resolved_config(config, os.path.join(config.out, "resolved_config.json"))
    return config


def _generator_spec(config: RunConfig) -> GeneratorSpec:
    g = config.graph
    return GeneratorSpec(
        kind=g.kind,
        n=g.n,
        mode=config.mode,
        p=g.p,
        z=g.z,
        forward=g.forward,
        backward=g.backward,
        seed_matrix=g.seed_matrix,
        power=g.power,
    )


def cmd_generate(args) -> int:
    config = _prepare(args)
    spec = _generator_spec(config)
    graph = generate_graph(spec, derive_rng(config.seed, STREAM_GRAPH))
    edges_path = _resolve(config.paths.edges, config.out)
    save_edge_list(graph, edges_path)
    save_node_map(list(range(graph.n)), _resolve(config.paths.node_map, config.out))
    print(f"generated {spec.kind} graph: n={graph.n} edges={graph.edge_count} -> {edges_path}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = _prepare(args)
    loaded = load_edge_list(_resolve_in(config.paths.edges, config.out), config.mode)
    sim = config.simulate
    if sim.beta <= 0.0:
        print("warning: beta <= 0 produces singleton cascades only; coverage unreachable")
    cascades, tracker = generate_until_coverage(
        loaded.graph,
        sim.beta,
        sim.alpha,
        sim.f_target,
        derive_rng(config.seed, STREAM_CASCADES),
        max_cascades=sim.max_cascades,
    )
    save_cascades(cascades, _resolve(config.paths.cascades, config.out))
    report = tracker.report()
    with open(_resolve(config.paths.coverage, config.out), "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if not tracker.target_reached:
        print(f"warning: coverage target {sim.f_target} not reached (achieved {tracker.fraction:.4f})")
    print(
        "simulated %d cascades (achieved_f=%.4f, mean_size=%.2f)"
        % (report["cascade_count"], report["achieved_f"], report["mean_cascade_size"])
    )
    return EXIT_OK


def _n_nodes_for_infer(config: RunConfig, cascades) -> int:
    edges_path = _resolve_in(config.paths.edges, config.out)
    if os.path.exists(edges_path):
        return load_edge_list(edges_path, config.mode).graph.n
    peak = max((max(c.nodes) for c in cascades), default=-1)
    return peak + 1


def cmd_infer(args) -> int:
    config = _prepare(args)
    cascades = load_cascades(_resolve_in(config.paths.cascades, config.out))
    n = _n_nodes_for_infer(config, cascades)
    if n < 1:
        raise ValueError("cannot infer over an empty node set")
    inf = config.infer
    params = ModelParams(inf.beta, WeightConfig(inf.alpha))
    prior_p = inf.prior_p
    if prior_p is None:
        init = initial_graph(cascades, n, config.mode)
        prior_p = min(max(init.density() / 4.0, 1e-4), 0.5)
    prior = PriorConfig(prior_p)
    iterations = inf.iterations or max(2000, int(inf.steps_factor * n * n))
    chain_config = ChainConfig(
        iterations=iterations,
        burn_in=inf.burn_in if inf.burn_in is not None else int(iterations * inf.burn_fraction),
        thinning=inf.thinning
        or (1 if inf.thin_divisor is None else max(1, int(n * n / inf.thin_divisor))),
        params=params,
        prior=prior,
        seed=config.seed,
        proposal=inf.proposal,
        candidate_restriction=inf.candidate_restriction,
        refresh_interval=inf.refresh_interval,
    )
    counts, stats_list, discrepancy = run_parallel_chains(
        cascades, chain_config, n, config.mode,
        n_chains=inf.chains, workers=config.workers,
    )
    margs = marginals_from_counts(counts)
    save_marginals(margs, _resolve(config.paths.marginals, config.out))
    trace_path = _resolve(config.paths.trace, config.out)
    _save_trace(stats_list[0].trace, trace_path)
    for k, st in enumerate(stats_list[1:], start=1):
        _save_trace(st.trace, trace_path.replace(".csv", f"_chain{k}.csv"))
    stats = {
        "n": n,
        "mode": config.mode,
        "chains": inf.chains,
        "iterations": iterations,
        "samples_taken": counts.samples_taken,
        "prior_p": prior_p,
        "chain_discrepancy": discrepancy,
        "acceptance_rates": [s.acceptance_rate for s in stats_list],
        "log_posterior_drift": max(s.log_posterior_drift for s in stats_list),
        "wall_seconds": sum(s.wall_seconds for s in stats_list),
    }
    with open(_resolve(config.paths.stats, config.out), "w", encoding="utf-8") as fh:
        json.dump(stats, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(
        "inferred marginals from %d cascades: %d chains, discrepancy=%.4f"
        % (len(cascades), inf.chains, discrepancy)
    )
    return EXIT_OK


def _save_trace(trace, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("step,log_posterior,acceptance_rate\n")
        for step, log_post, rate in trace:
            fh.write(f"{step},{log_post!r},{rate!r}\n")


def cmd_evaluate(args) -> int:
    config = _prepare(args)
    truth_path = args.truth or (
        _resolve_in(config.paths.truth, config.out)
        if config.paths.truth
        else _resolve_in(config.paths.edges, config.out)
    )
    truth = load_edge_list(truth_path, config.mode).graph
    marg_path = args.marginals or _resolve_in(config.paths.marginals, config.out)
    margs = load_marginals(marg_path, truth.n, config.mode)
    curve = roc(margs, truth)
    fpa = false_positive_alarm(margs, truth)
    save_roc(curve, _resolve(config.paths.roc, config.out))
    print(f"auc={curve.auc!r} fpa={fpa!r}")
    return EXIT_OK


def _scale_from(section, chains: int) -> ChainScale:
    return ChainScale(
        steps_factor=section.steps_factor,
        thin_divisor=getattr(section, "thin_divisor", None),
        n_chains=chains,
    )


def cmd_experiment(args) -> int:
    config = _prepare(args)
    exp = config.experiment
    generators = []
    for name in exp.networks:
        n = exp.n
        if name in ("core_periphery", "hierarchical") and exp.kron_n:
            n = exp.kron_n
        generators.append((name, named_generator(name, n, config.mode)))
    spec = ExperimentSpec(
        generators=tuple(generators),
        f_grid=exp.f_grid,
        beta=exp.beta,
        alpha=exp.alpha,
        repetitions=exp.repetitions,
        seed=config.seed,
        scale=_scale_from(exp, exp.chains),
        prior_p=exp.prior_p,
        workers=config.workers,
    )
    rows = run_synthetic_experiment(spec, out_dir=config.out)
    for row in rows:
        print(
            "%s n=%d f=%s rep=%d auc=%.4f fpa=%.4f %.1fs"
            % (row["network"], row["n"], row["f"], row["rep"], row["auc"], row["fpa"], row["seconds"])
        )
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    config = _prepare(args)
    sens = config.sensitivity
    spec = SensitivitySpec(
        generator=GeneratorSpec(sens.kind, n=sens.n, mode=config.mode, z=sens.z),
        true_beta=sens.true_beta,
        alpha=sens.alpha,
        f_target=sens.f_target,
        beta_grid=sens.beta_grid,
        p_grid=sens.p_grid,
        seed=config.seed,
        scale=_scale_from(sens, sens.chains),
        workers=config.workers,
    )
    results = run_sensitivity_sweep(spec, out_dir=config.out)
    for key in ("beta", "p"):
        for row in results[key]:
            print(f"{row['parameter']}={row['value']:g} auc={row['auc']:.4f} fpa={row['fpa']:.4f}")
    return EXIT_OK


def cmd_email(args) -> int:
    config = _prepare(args)
    em = config.email
    if not em.edges:
        raise ValueError("email experiment needs email.edges in the config")
    rows = run_email_experiment(
        em.edges,
        labels_path=em.labels,
        departments=em.departments or None,
        include_whole=em.include_whole,
        beta=em.beta,
        alpha=em.alpha,
        f_target=em.f_target,
        seed=config.seed,
        scale=_scale_from(em, em.chains),
        workers=config.workers,
        out_dir=config.out,
    )
    for row in rows:
        print(
            "%s n=%d edges=%d cascades=%d auc=%.4f"
            % (row["network"], row["n"], row["edges"], row["cascades"], row["auc"])
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cascadebayes",
        description="Posterior network reconstruction from information cascades",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, extra in [
        ("generate", cmd_generate, []),
        ("simulate", cmd_simulate, []),
        ("infer", cmd_infer, ["chains"]),
        ("evaluate", cmd_evaluate, ["marginals", "truth"]),
        ("experiment", cmd_experiment, []),
        ("sensitivity", cmd_sensitivity, []),
        ("email", cmd_email, []),
    ]:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=int, help="root RNG seed (overrides config)")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--mode", choices=["directed", "undirected"])
        p.add_argument("--workers", type=int, help="parallel worker processes")
        if "chains" in extra:
            p.add_argument("--chains", type=int, help="number of MCMC chains")
        if "marginals" in extra:
            p.add_argument("--marginals", help="marginals CSV path")
            p.add_argument("--truth", help="ground-truth edge list path")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
