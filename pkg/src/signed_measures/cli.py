"""Command-line front end: simulate, posterior-update, graph.

All randomness flows from a single --seed through split streams, so repeated
runs are byte-identical (manifest timestamps excluded).  Structured objects
go to JSON, draw streams to JSON Lines, tabular statistics to CSV, and each
report also renders a matplotlib figure next to its delimited output.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .bnp import (
    FixedAtom,
    NormalDist,
    Observation,
    PosteriorDensity,
    PosteriorPmf,
    TraitPrior,
    UniformBase,
    gaussian_example_prior,
    posterior_update_continuous,
    posterior_update_discrete,
    signed_poisson_likelihood,
)
from .errors import InsufficientWindows, SignedMeasuresError, SpecValidationError
from .graph import DEFAULT_GRAPH_EPS, GraphConfig, exchangeability_probe, generate_graph, sparsity_scan
from .levy import CharacteristicPair, check_levy_integrability, spec_from_json, weight_from_json
from .measure import BorelSet, Interval, SignedAtomicMeasure, evaluate
from .rng import RngStream
from .samplers import DEFAULT_EPS, GrmKernelSpec, check_grm_kernel, sample_crsm, sample_grm, sample_skellam_pp
from . import report

log = logging.getLogger("signed_measures")


def _stream_for_rep(seed: int, i: int) -> RngStream:
    return RngStream(np.random.SeedSequence(seed, spawn_key=(i,)))


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_manifest(out_dir: Path, command: str, flags: dict, seed, inputs, started: float):
    manifest = {
        "command": command,
        "flags": {
            k: v
            for k, v in sorted(flags.items())
            if isinstance(v, (str, int, float, bool, type(None)))
        },
        "seed": seed,
        "version": __version__,
        "input_hashes": {str(p): _sha256(p) for p in inputs if p and Path(p).exists()},
        "started": started,
        "finished": time.time(),
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecValidationError(f"cannot read {path}: {exc}") from exc


# --- simulate ---------------------------------------------------------------


def _simulate_rep(spec_data: dict, eps: float, seed: int, i: int, sets):
    rng = _stream_for_rep(seed, i)
    kind = spec_data.get("kind", "crsm")
    if kind == "skellam":
        mu = sample_skellam_pp(
            spec_data["mu1"], spec_data["mu2"], rng, spec_data.get("region_len", 1.0)
        )
    elif kind == "grm":
        spec = GrmKernelSpec(
            tuple(Interval(lo, hi) for lo, hi in spec_data["partition"]),
            np.array(spec_data["cov"], dtype=float),
        )
        cells = sample_grm(spec, rng)
        line = json.dumps({"cells": [float(c) for c in cells]})
        return line, [(j, float(c)) for j, c in enumerate(cells)]
    else:
        pair = CharacteristicPair(spec_from_json(spec_data))
        mu, _ = sample_crsm(pair, eps=eps, rng=rng)
    line = mu.to_json_str()
    evals = [(j, evaluate(mu, B)) for j, B in enumerate(sets)]
    return line, evals


def _validate_simulate_spec(spec_data: dict):
    kind = spec_data.get("kind", "crsm")
    if kind == "skellam":
        if spec_data.get("mu1", -1) < 0 or spec_data.get("mu2", -1) < 0:
            raise SpecValidationError("skellam rates must be nonnegative")
        return
    if kind == "grm":
        spec = GrmKernelSpec(
            tuple(Interval(lo, hi) for lo, hi in spec_data["partition"]),
            np.array(spec_data["cov"], dtype=float),
        )
        if not check_grm_kernel(spec)["pd"]:
            raise SpecValidationError("GRM covariance kernel is not positive definite")
        return
    try:
        levy = spec_from_json(spec_data)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecValidationError(f"malformed spec: {exc}") from exc
    chk = check_levy_integrability(levy)
    if not chk["ok"]:
        raise SpecValidationError("Lévy integrability check failed: integral of 1∧|w| diverges")


def cmd_simulate(args) -> int:
    started = time.time()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec_data = _load_json(args.spec)
    _validate_simulate_spec(spec_data)
    sets = []
    if args.sets:
        sets = [BorelSet.from_json(s) for s in _load_json(args.sets)]
    elif spec_data.get("kind", "crsm") != "grm":
        T = float(spec_data.get("T", spec_data.get("region_len", 1.0)))
        sets = [BorelSet.interval(0.0, T)]

    reps = args.reps
    work = ((spec_data, args.eps, args.seed, i, sets) for i in range(reps))
    if args.jobs > 1 and reps > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_simulate_rep_star, work, chunksize=64))
    else:
        results = [_simulate_rep(*w) for w in work]

    values_by_set: dict[int, list] = {}
    with open(out_dir / "draws.jsonl", "w") as fh_draws, open(
        out_dir / "evals.csv", "w", newline=""
    ) as fh_csv:
        writer = csv.writer(fh_csv)
        writer.writerow(["rep", "set_id", "value"])
        for i, (line, evals) in enumerate(results):
            fh_draws.write(line + "\n")
            for set_id, value in evals:
                writer.writerow([i, set_id, repr(value)])
                values_by_set.setdefault(set_id, []).append(value)
    report.render_eval_histogram(values_by_set, out_dir / "evals_hist.png")
    _write_manifest(out_dir, "simulate", vars(args), args.seed, [args.spec, args.sets], started)
    return 0


def _simulate_rep_star(w):
    return _simulate_rep(*w)


# --- posterior-update -------------------------------------------------------


def _prior_from_json(data: dict) -> TraitPrior:
    fixed = tuple(
        FixedAtom(a["psi"], NormalDist(a["dist"]["mu"], a["dist"]["sigma"]))
        for a in data.get("fixed_atoms", [])
    )
    weight = weight_from_json(data["weight"])
    base_data = data.get("base", {"name": "uniform", "lo": 0.0, "hi": 1.0})
    base = UniformBase(base_data.get("lo", 0.0), base_data.get("hi", 1.0))
    return TraitPrior(fixed, weight, base)


def _likelihood_from_json(data: dict, prior_data: dict):
    kind = data.get("kind")
    if kind == "signed_poisson":
        return signed_poisson_likelihood(), None
    if kind == "gaussian_example":
        _, lik = gaussian_example_prior(data["alpha"], data["sigma"])
        return lik, {"alpha": data["alpha"], "sigma": data["sigma"]}
    raise SpecValidationError(f"unknown likelihood kind {kind!r}")


def _observations_from_jsonl(path):
    obs = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        obs.append(Observation(tuple((a["loc"], a["x"]) for a in rec["atoms"])))
    return obs


def _tabulate(part, grid):
    if isinstance(part, PosteriorPmf):
        return {"psi": part.psi, "pmf": [[th, p] for th, p in part.pmf()]}
    dens = [part.density(t) if t != 0.0 else 0.0 for t in grid]
    return {"psi": part.psi, "grid": list(grid), "density": dens}


def cmd_posterior(args) -> int:
    started = time.time()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    prior_data = _load_json(args.prior)
    prior = _prior_from_json(prior_data)
    lik, gaussian_meta = _likelihood_from_json(_load_json(args.likelihood), prior_data)
    obs = _observations_from_jsonl(args.obs)

    if not obs:
        out = {
            "m": 0,
            "fixed": [
                {"psi": a.psi, "dist": a.weight_dist.to_json()} for a in prior.fixed_atoms
            ],
            "new": [],
            "ordinary": prior.weight_measure.to_json(),
        }
        (out_dir / "post.json").write_text(json.dumps(out, indent=2) + "\n")
        report.render_posterior_densities([], out_dir / "posterior_densities.png")
        _write_manifest(
            out_dir, "posterior-update", vars(args), None,
            [args.prior, args.likelihood, args.obs], started,
        )
        return 0

    from .bnp import ContinuousLikelihood

    if isinstance(lik, ContinuousLikelihood):
        result = posterior_update_continuous(prior, lik, obs)
    else:
        result = posterior_update_discrete(prior, lik, obs)

    grid = [t for t in np.linspace(-6.0, 6.0, 401)]
    out = {
        "m": result.m,
        "fixed": [_tabulate(p, grid) for p in result.fixed_updates],
        "new": [_tabulate(p, grid) for p in result.new_atoms],
    }
    if gaussian_meta is not None:
        out["ordinary"] = {
            "family": "gaussian_example",
            "alpha": gaussian_meta["alpha"],
            "m": result.m,
            "formula": "(1 - |theta|^(2-alpha) * exp(-theta^2))^m * |theta|^(alpha-2)",
        }
    else:
        base = getattr(result.ordinary_weight_measure, "base_fn", None)
        out["ordinary"] = {
            "kind": "tilted",
            "base": prior.weight_measure.to_json(),
            "zero_factor": lik.name,
            "m": result.m,
        } if base is not None else result.ordinary_weight_measure.to_json()
    (out_dir / "post.json").write_text(json.dumps(out, indent=2) + "\n")

    curves = []
    for part in result.fixed_updates + result.new_atoms:
        if isinstance(part, PosteriorDensity):
            curves.append(
                (f"{part.label} @ {part.psi:.3g}", grid,
                 [part.density(t) if t != 0.0 else 0.0 for t in grid])
            )
    report.render_posterior_densities(curves, out_dir / "posterior_densities.png")
    _write_manifest(
        out_dir, "posterior-update", vars(args), None,
        [args.prior, args.likelihood, args.obs], started,
    )
    return 0


# --- graph ------------------------------------------------------------------


def _rho_from_json(data: dict):
    if "weight" in data:
        return weight_from_json(data["weight"])
    return weight_from_json(data)


def cmd_graph(args) -> int:
    started = time.time()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rho = _rho_from_json(_load_json(args.spec))
    alphas = [float(a) for a in args.alphas.split(",") if a]

    if args.scan:
        result = sparsity_scan(rho, alphas, reps=args.reps, seed=args.seed, eps=args.eps)
        with open(out_dir / "scan.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha", "mean_nodes", "mean_edges"])
            for row in result["table"]:
                writer.writerow([row["alpha"], repr(row["mean_nodes"]), repr(row["mean_edges"])])
        (out_dir / "scan_summary.json").write_text(
            json.dumps({"slope": result["slope"]}, indent=2) + "\n"
        )
        report.render_scan(result["table"], result["slope"], out_dir / "scan.png")
    elif args.probe:
        if len(alphas) != 1:
            raise SpecValidationError("--probe needs exactly one alpha")
        result = exchangeability_probe(
            rho, alphas[0], h=args.block, perm=args.perm, reps=args.reps,
            seed=args.seed, eps=args.eps,
        )
        with open(out_dir / "probe.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["statistic", "ks_stat", "p_value"])
            for key, row in result["stats"].items():
                writer.writerow([key, repr(row["ks_stat"]), repr(row["p_value"])])
        (out_dir / "probe.json").write_text(json.dumps(result, indent=2) + "\n")
    else:
        if len(alphas) != 1:
            raise SpecValidationError("graph sampling needs exactly one alpha")
        cfg = GraphConfig(rho, alphas[0], eps=args.eps, seed=args.seed)
        _, z = generate_graph(cfg, RngStream(args.seed))
        with open(out_dir / "nodes.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "theta", "w"])
            for i, (theta, w) in enumerate(z.nodes):
                writer.writerow([i, repr(theta), repr(w)])
        with open(out_dir / "edges.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["i", "j", "sign"])
            for (i, j), s in sorted(z.edges.items()):
                writer.writerow([i, j, s])
    _write_manifest(out_dir, "graph", vars(args), args.seed, [args.spec], started)
    return 0


# --- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signed-measures",
        description="Simulate, decompose and fit random signed measures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="draw CRSM / Skellam / GRM samples")
    p_sim.add_argument("--spec", required=True)
    p_sim.add_argument("--sets", default=None)
    p_sim.add_argument("--reps", type=int, default=100)
    p_sim.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--jobs", type=int, default=1)
    p_sim.add_argument("--out", required=True)
    p_sim.set_defaults(fn=cmd_simulate)

    p_post = sub.add_parser("posterior-update", help="conjugate posterior update")
    p_post.add_argument("--prior", required=True)
    p_post.add_argument("--likelihood", required=True)
    p_post.add_argument("--obs", required=True)
    p_post.add_argument("--out", required=True)
    p_post.set_defaults(fn=cmd_posterior)

    p_graph = sub.add_parser("graph", help="signed graph sampling / scans / probes")
    p_graph.add_argument("--spec", required=True)
    p_graph.add_argument("--alphas", required=True)
    p_graph.add_argument("--reps", type=int, default=20)
    p_graph.add_argument("--eps", type=float, default=DEFAULT_GRAPH_EPS)
    p_graph.add_argument("--seed", type=int, default=0)
    p_graph.add_argument("--jobs", type=int, default=1)
    p_graph.add_argument("--scan", action="store_true")
    p_graph.add_argument("--probe", action="store_true")
    p_graph.add_argument("--perm", default="identity")
    p_graph.add_argument("--block", type=float, default=1.0)
    p_graph.add_argument("--out", required=True)
    p_graph.set_defaults(fn=cmd_graph)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("SIGNED_MEASURES_LOG", "WARNING").upper())
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SignedMeasuresError as exc:
        print(f"{exc.token()}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
