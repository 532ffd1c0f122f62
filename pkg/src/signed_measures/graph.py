"""Generative sparse/dense signed random graph driven by a CRSM.

Node weights come from a CRSM on the window [0, alpha]; positive-weight and
negative-weight nodes link through two independent Poisson multigraphs with
intensities W_+ x W_+ and W_- x W_-, and the signed simple graph keeps the
sign with multiplicity clipped to one.  Opposite-sign node pairs are never
linked, so pair sampling iterates same-sign classes only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import BlockMismatch, DegenerateScan, InsufficientWindows
from .levy import CharacteristicPair, LevySpec, WeightMeasure
from .rng import RngStream
from .samplers import sample_crsm

DEFAULT_GRAPH_EPS = 1e-4


@dataclass(frozen=True)
class GraphConfig:
    rho: WeightMeasure
    alpha: float
    eps: float = DEFAULT_GRAPH_EPS
    seed: int = 0


@dataclass(frozen=True)
class SignedMultigraph:
    """Directed integer-weighted graph D = D_+ - D_-.

    counts maps ordered node pairs (i, j) to the signed multiplicity n_ij;
    entries are nonzero only for same-sign node pairs.
    """

    nodes: tuple[tuple[float, float], ...]  # (theta, w)
    counts: dict


@dataclass(frozen=True)
class SignedGraph:
    """Undirected simple signed graph; edges keyed by canonical (i, j), i <= j."""

    nodes: tuple[tuple[float, float], ...]
    edges: dict  # (i, j) -> +1 / -1

    def edge(self, i: int, j: int) -> int:
        return self.edges.get((min(i, j), max(i, j)), 0)


def _directed_pair_counts(idx: np.ndarray, weights_abs: np.ndarray, rng: RngStream):
    """Ordered-pair multiplicities of a Poisson process with intensity
    (sum_i u_i delta_i) x (sum_j u_j delta_j); returns (i, j, count) arrays
    with global node indices."""
    total = float(weights_abs.sum())
    if total == 0.0 or len(idx) == 0:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=int), np.zeros(0, dtype=int)
    n_points = rng.gen.poisson(total * total)
    if n_points == 0:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=int), np.zeros(0, dtype=int)
    p = weights_abs / total
    src = rng.gen.choice(len(idx), size=n_points, p=p)
    dst = rng.gen.choice(len(idx), size=n_points, p=p)
    key = src.astype(np.int64) * len(idx) + dst
    uniq, counts = np.unique(key, return_counts=True)
    return idx[uniq // len(idx)], idx[uniq % len(idx)], counts


def _sample_weighted_nodes(cfg: GraphConfig, rng: RngStream):
    pair = CharacteristicPair(LevySpec(cfg.rho, base_rate=1.0, T=cfg.alpha))
    w_measure, _ = sample_crsm(pair, eps=cfg.eps, rng=rng)
    thetas = np.array([a.location for a in w_measure.atoms])
    ws = np.array([a.weight for a in w_measure.atoms])
    return thetas, ws


def _simulate_edge_arrays(cfg: GraphConfig, rng: RngStream):
    """(thetas, ws, directed (i, j, signed count) arrays)."""
    thetas, ws = _sample_weighted_nodes(cfg, rng)
    iis, jjs, cnts = [], [], []
    for sign in (+1, -1):
        idx = np.flatnonzero(np.sign(ws) == sign)
        i_arr, j_arr, c_arr = _directed_pair_counts(idx, np.abs(ws[idx]), rng)
        iis.append(i_arr)
        jjs.append(j_arr)
        cnts.append(sign * c_arr)
    return (
        thetas,
        ws,
        np.concatenate(iis),
        np.concatenate(jjs),
        np.concatenate(cnts),
    )


def generate_graph(cfg: GraphConfig, rng: RngStream | None = None):
    """Draw (SignedMultigraph, SignedGraph) from the hierarchical model."""
    if rng is None:
        rng = RngStream(cfg.seed)
    thetas, ws, ii, jj, nn = _simulate_edge_arrays(cfg, rng)
    nodes = tuple((float(t), float(w)) for t, w in zip(thetas, ws))
    counts = {(int(i), int(j)): int(n) for i, j, n in zip(ii, jj, nn)}
    edges: dict[tuple[int, int], int] = {}
    for (i, j), n in counts.items():
        a, b = (i, j) if i <= j else (j, i)
        edges[(a, b)] = edges.get((a, b), 0) + n
    edges = {k: (1 if v > 0 else -1) for k, v in edges.items() if v != 0}
    return SignedMultigraph(nodes, counts), SignedGraph(nodes, edges)


def count_observed(Z: SignedGraph) -> dict:
    """Observed node count (degree >= 1, self-loops count) and edge count
    over unordered pairs including the diagonal."""
    touched = set()
    for i, j in Z.edges:
        touched.add(i)
        touched.add(j)
    return {"n_nodes": len(touched), "n_edges": len(Z.edges)}


def _counts_fast(cfg: GraphConfig, rng: RngStream):
    """(n_nodes, n_edges) without materializing the dict-based graph types."""
    thetas, ws, ii, jj, nn = _simulate_edge_arrays(cfg, rng)
    if len(ii) == 0:
        return 0, 0
    a = np.minimum(ii, jj)
    b = np.maximum(ii, jj)
    pair_key = a.astype(np.int64) * (len(ws) + 1) + b
    uniq = np.unique(pair_key)
    n_edges = len(uniq)
    n_nodes = len(np.unique(np.concatenate([a, b])))
    return n_nodes, n_edges


def sparsity_scan(
    rho: WeightMeasure,
    alphas,
    reps: int,
    seed: int | RngStream = 0,
    eps: float = DEFAULT_GRAPH_EPS,
) -> dict:
    """Least-squares slope of log mean edges vs log mean nodes across windows."""
    alphas = sorted(float(a) for a in alphas)
    if len(alphas) < 3:
        raise InsufficientWindows(f"need >= 3 window sizes, got {len(alphas)}")
    root = seed if isinstance(seed, RngStream) else RngStream(seed)
    streams = root.split(len(alphas) * reps)
    points = []
    table = []
    k = 0
    for alpha in alphas:
        nodes, edges = [], []
        for _ in range(reps):
            cfg = GraphConfig(rho, alpha, eps=eps)
            n_nodes, n_edges = _counts_fast(cfg, streams[k])
            k += 1
            nodes.append(n_nodes)
            edges.append(n_edges)
        mean_nodes = float(np.mean(nodes))
        mean_edges = float(np.mean(edges))
        if mean_nodes == 0.0:
            raise DegenerateScan(f"window alpha={alpha} produced zero nodes in all reps")
        table.append({"alpha": alpha, "mean_nodes": mean_nodes, "mean_edges": mean_edges})
        points.append((math.log(mean_nodes), math.log(mean_edges)))
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    slope = float(np.polyfit(xs, ys, 1)[0])
    return {"slope": slope, "points": points, "table": table}


def _block_mass_matrix(nodes, edges, alpha: float, h: float) -> np.ndarray:
    """Z-mass of each A_p x A_q block; ordered pairs counted both ways,
    diagonal once, matching the double-sum definition of Z."""
    n_blocks = int(round(alpha / h))
    M = np.zeros((n_blocks, n_blocks))
    for (i, j), z in edges.items():
        p = min(int(nodes[i][0] // h), n_blocks - 1)
        q = min(int(nodes[j][0] // h), n_blocks - 1)
        M[p, q] += z
        if i != j:
            M[q, p] += z
    return M


def _block_stats(M: np.ndarray) -> dict:
    off = M.sum() - np.trace(M)
    return {
        "pos_mass": float(np.clip(M, 0.0, None).sum()),
        "neg_mass": float(np.clip(-M, 0.0, None).sum()),
        "offdiag_sum": float(off),
    }


def exchangeability_probe(
    rho: WeightMeasure,
    alpha: float,
    h: float,
    perm="reversal",
    reps: int = 500,
    seed: int | RngStream = 0,
    eps: float = DEFAULT_GRAPH_EPS,
) -> dict:
    """Two-sample KS comparison of block statistics between fresh graphs and
    independently regenerated graphs with permuted block indices."""
    ratio = alpha / h
    if abs(ratio - round(ratio)) > 1e-9:
        raise BlockMismatch(f"alpha={alpha} is not a multiple of h={h}")
    n_blocks = int(round(ratio))
    root = seed if isinstance(seed, RngStream) else RngStream(seed)
    perm_rng, *streams = root.split(2 * reps + 1)
    if perm == "identity":
        pi = np.arange(n_blocks)
    elif perm == "reversal":
        pi = np.arange(n_blocks)[::-1]
    elif perm == "random":
        pi = perm_rng.gen.permutation(n_blocks)
    else:
        pi = np.asarray(perm, dtype=int)

    base_stats: dict[str, list] = {"pos_mass": [], "neg_mass": [], "offdiag_sum": []}
    perm_stats: dict[str, list] = {"pos_mass": [], "neg_mass": [], "offdiag_sum": []}
    for r in range(reps):
        cfg = GraphConfig(rho, alpha, eps=eps)
        _, z1 = generate_graph(cfg, streams[2 * r])
        _, z2 = generate_graph(cfg, streams[2 * r + 1])
        m1 = _block_mass_matrix(z1.nodes, z1.edges, alpha, h)
        m2 = _block_mass_matrix(z2.nodes, z2.edges, alpha, h)
        m2 = m2[np.ix_(pi, pi)]
        for key, val in _block_stats(m1).items():
            base_stats[key].append(val)
        for key, val in _block_stats(m2).items():
            perm_stats[key].append(val)

    report = {}
    for key in base_stats:
        ks = stats.ks_2samp(base_stats[key], perm_stats[key])
        report[key] = {"ks_stat": float(ks.statistic), "p_value": float(ks.pvalue)}
    return {"perm": [int(p) for p in pi], "stats": report}
