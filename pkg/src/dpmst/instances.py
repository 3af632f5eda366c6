"""Instance generators for the three experiment families, plus edge-list file I/O.

Edge-list text format (UTF-8, LF newlines): lines starting with ``#`` are
comments; the first non-comment line is ``n m delta_inf``; then m lines
``u v w`` with 1-based endpoints and a decimal weight.
"""

from __future__ import annotations

import math

import numpy as np

from .graph import WeightedGraph, build_graph, _connected
from .rng import RngStream


class GenerationError(RuntimeError):
    """A generator could not produce a valid instance (e.g. connectivity cap)."""


class ParseError(ValueError):
    """Malformed instance file; the message names the offending line."""


def erdos_renyi_instance(n: int, p: float, wmin: float, wmax: float,
                         stream: RngStream, max_attempts: int = 1000) -> WeightedGraph:
    """G(n, p) with uniform weights on [wmin, wmax], resampled until connected."""
    if n < 1 or not 0.0 <= p <= 1.0 or wmax < wmin:
        raise ValueError(f"bad parameters: n={n}, p={p}, wmin={wmin}, wmax={wmax}")
    iu, iv = np.triu_indices(n, k=1)
    iu, iv = iu + 1, iv + 1
    for _ in range(max_attempts):
        if p >= 1.0:
            keep = np.ones(len(iu), dtype=bool)
        else:
            keep = stream.uniform(len(iu)) <= p
        us, vs = iu[keep], iv[keep]
        edges = list(zip(us.tolist(), vs.tolist()))
        if not _connected(n, edges):
            continue
        weights = wmin + (wmax - wmin) * stream.uniform(len(edges))
        return build_graph(n, edges, weights)
    raise GenerationError(
        f"no connected G({n}, {p}) sample within {max_attempts} attempts")


def mi_weight(flip_p: float, k: int) -> float:
    """Pairwise mutual information between chain bits k hops apart.

    With a = (1-2p)^k, this is (1/2) * ((1+a) * log2(1+a) + (1-a) * log2(1-a)).
    Strictly decreasing in k, nonnegative, and 0 in the independence limit.
    """
    if not 0.0 < flip_p < 0.5:
        raise ValueError(f"flip probability must lie in (0, 1/2), got {flip_p}")
    if k < 1 or int(k) != k:
        raise ValueError(f"hop distance must be a positive integer, got {k}")
    a = (1.0 - 2.0 * flip_p) ** k
    p1 = 1.0 + a
    p2 = 1.0 - a
    return 0.5 * (p1 * math.log2(p1) + (p2 * math.log2(p2) if p2 > 0.0 else 0.0))


def parity_even_prob(k: int, flip_p: float) -> float:
    """P(Binomial(k, p) is even) = 1/2 + (1/2) * (1-2p)^k."""
    if k < 0 or int(k) != k:
        raise ValueError(f"k must be a nonnegative integer, got {k}")
    if not 0.0 <= flip_p <= 1.0:
        raise ValueError(f"flip probability must lie in [0, 1], got {flip_p}")
    return 0.5 + 0.5 * (1.0 - 2.0 * flip_p) ** k


def mi_sensitivity(dataset_size: int) -> float:
    """Sensitivity of a pairwise mutual-information entry over d records: log2(d)/d."""
    if dataset_size < 2 or int(dataset_size) != dataset_size:
        raise ValueError(f"dataset size must be an integer >= 2, got {dataset_size}")
    return math.log2(dataset_size) / dataset_size


def mutual_info_chain_instance(n: int, flip_p: float, dataset_size: int) -> WeightedGraph:
    """Complete graph of negated pairwise mutual information for the bit chain.

    Negation turns the maximum spanning tree of the mutual-information matrix
    into a plain MST, whose true solution is the chain path. The instance's
    delta_inf is the mutual-information sensitivity log2(d)/d.
    """
    if n < 2:
        raise ValueError(f"need at least two vertices, got {n}")
    edges = []
    weights = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            edges.append((i, j))
            weights.append(-mi_weight(flip_p, j - i))
    return build_graph(n, edges, weights, delta_inf=mi_sensitivity(dataset_size))


def hard_instance(n: int, beta: float, s: int, stream: RngStream) -> WeightedGraph:
    """Complete graph with two-stage weights: P_e ~ Beta(beta, beta), w_e ~ Bin(s, P_e)."""
    if n < 2 or beta <= 0 or s < 1 or int(s) != s:
        raise ValueError(f"bad parameters: n={n}, beta={beta}, s={s}")
    iu, iv = np.triu_indices(n, k=1)
    edges = list(zip((iu + 1).tolist(), (iv + 1).tolist()))
    m = len(edges)
    p_e = stream.beta(beta, beta, size=m)
    weights = stream.binomial(int(s), p_e).astype(float)
    return build_graph(n, edges, weights)


def write_instance(g: WeightedGraph, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{g.n} {g.m} {g.delta_inf!r}\n")
        for (u, v), w in zip(g.edges, g.weights):
            fh.write(f"{u} {v} {float(w)!r}\n")


def read_instance(path) -> WeightedGraph:
    header = None
    edges = []
    weights = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if header is None:
                if len(fields) != 3:
                    raise ParseError(
                        f"line {lineno}: header must be 'n m delta_inf', got {line!r}")
                try:
                    header = (int(fields[0]), int(fields[1]), float(fields[2]))
                except ValueError:
                    raise ParseError(
                        f"line {lineno}: cannot parse header {line!r}") from None
                continue
            if len(fields) != 3:
                raise ParseError(f"line {lineno}: expected 'u v w', got {line!r}")
            try:
                edges.append((int(fields[0]), int(fields[1])))
                weights.append(float(fields[2]))
            except ValueError:
                raise ParseError(f"line {lineno}: cannot parse edge {line!r}") from None
    if header is None:
        raise ParseError("line 1: missing header")
    n, m, delta_inf = header
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges but file has {len(edges)}")
    return build_graph(n, edges, weights, delta_inf=delta_inf)
