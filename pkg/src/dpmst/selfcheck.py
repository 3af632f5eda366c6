"""Curated verification pass behind ``dpmst selftest``.

Each check returns (name, passed, detail). Statistical checks use fixed seeds
and reduced trial counts; the pytest suite runs the full-strength versions.
"""

from __future__ import annotations

import math

import numpy as np

from .accounting import eps_from_rho_delta, rho_from_eps_delta
from .exact import brute_force_mst, chi_square_gof, exact_selection_distribution
from .graph import build_graph, is_spanning_tree, kruskal_mst
from .instances import hard_instance, mi_weight, mutual_info_chain_instance, parity_even_prob
from .rng import RngStream
from .sampling import SamplingTree
from .harness import equivalence_suite


def _random_connected_graph(stream: RngStream, max_n: int = 6):
    n = 2 + int(stream.uniform() * (max_n - 1))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    edges = [pr for pr in pairs if stream.uniform() <= 0.6]
    perm = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):  # Fisher-Yates for a random spanning path
        j = int(stream.uniform() * (i + 1))
        perm[i], perm[j] = perm[j], perm[i]
    for a, b in zip(perm, perm[1:]):
        e = (min(a, b), max(a, b))
        if e not in edges:
            edges.append(e)
    edges.sort()
    weights = [stream.uniform() * 100.0 for _ in edges]
    return build_graph(n, edges, weights)


def check_accounting():
    worst = 0.0
    for eps in (0.1, 1.0, 5.0):
        for delta in (1e-2, 1e-6, 1e-10):
            back = eps_from_rho_delta(rho_from_eps_delta(eps, delta), delta)
            worst = max(worst, abs(back - eps))
    return "accounting round-trip", worst <= 1e-9, f"max |eps - back| = {worst:.3e}"


def check_kruskal_oracle():
    stream = RngStream(2024, (11,))
    for _ in range(200):
        g = _random_connected_graph(stream)
        if kruskal_mst(g) != brute_force_mst(g):
            return "kruskal vs brute force", False, "disagreement found"
        if not is_spanning_tree(g, kruskal_mst(g).edge_ids):
            return "kruskal vs brute force", False, "non-tree output"
    return "kruskal vs brute force", True, "200 random graphs agree"

def check_sampling_tree():
    stream = RngStream(5, (1,))
    tree = SamplingTree([1.0, 2.0, 3.0, 4.0])
    counts = [0, 0, 0, 0]
    n = 40000
    for _ in range(n):
        counts[tree.sample(stream)] += 1
    expected = [0.1, 0.2, 0.3, 0.4]
    stat = sum((c - p * n) ** 2 / (p * n) for c, p in zip(counts, expected))
    return "sum-tree proportional sampling", stat < 16.27, f"chi2 = {stat:.2f} (df=3)"


def check_selection_product_formula():
    dist = exact_selection_distribution([1.0, 2.0, 3.0], 2)
    expect = {(2, 1): 1 / 3, (1, 2): 1 / 4, (0, 1): 1 / 15,
              (0, 2): 1 / 10, (1, 0): 1 / 12, (2, 0): 1 / 6}
    worst = max(abs(dist[k] - v) for k, v in expect.items())
    total = abs(dist.total() - 1.0)
    ok = worst < 1e-12 and total < 1e-12
    return "selection product formula", ok, f"max dev {worst:.2e}, norm dev {total:.2e}"


def check_equivalence():
    results = equivalence_suite("k3", 1.0, 30000, 0.001, master_seed=77)
    ok = all(r.passed for r in results.values())
    stats = ", ".join(f"{m}: {r.chi.statistic:.2f}" for m, r in results.items())
    return "three-mechanism equivalence (k3)", ok, stats


def check_distribution_facts():
    stream = RngStream(31, (2,))
    x1 = stream.exponential(1.0, size=100000)
    x2 = stream.exponential(3.0, size=100000)
    freq = float(np.mean(x1 < x2))
    ok = abs(freq - 0.25) <= 0.015
    return "min-of-exponentials fact", ok, f"freq = {freq:.4f} (expect 0.25)"


def check_mi_values():
    targets = {1: 0.7136, 2: 0.5471, 3: 0.4277}
    worst = max(abs(mi_weight(0.05, k) - v) for k, v in targets.items())
    g = mutual_info_chain_instance(8, 0.05, 10000)
    path = frozenset(e + 1 for e, (u, v) in enumerate(g.edges) if v == u + 1)
    ok = worst <= 5e-4 and kruskal_mst(g).edge_ids == path
    return "mutual-information chain", ok, f"max value dev {worst:.2e}"


def check_parity():
    worst = 0.0
    for k in range(0, 11):
        for p in (0.05, 0.3, 0.5):
            brute = sum(math.comb(k, i) * p ** i * (1 - p) ** (k - i)
                        for i in range(0, k + 1, 2))
            worst = max(worst, abs(parity_even_prob(k, p) - brute))
    return "parity of binomials", worst <= 1e-12, f"max dev {worst:.2e}"


def check_hard_instance():
    g = hard_instance(60, 0.5 * math.log(60), 10, RngStream(9, (3,)))
    ok = bool(np.all(g.weights >= 0) and np.all(g.weights <= 10))
    mean = float(g.weights.mean())
    return "hard-instance generator", ok and abs(mean - 5.0) < 1.0, f"mean weight {mean:.3f}"


def check_chi_square_comparator():
    from .exact import ExactDistribution
    exact = ExactDistribution({"a": 1 / 3, "b": 1 / 3, "c": 1 / 3})
    degenerate = chi_square_gof({"a": 300}, exact, 0.001)
    ok = (not degenerate.passed) and abs(degenerate.statistic - 600.0) < 1e-9
    exactly = chi_square_gof({"a": 100, "b": 100, "c": 100}, exact, 0.001)
    ok = ok and exactly.passed and exactly.statistic == 0.0
    return "chi-square comparator", ok, f"fail-case statistic {degenerate.statistic:.1f}"


ALL_CHECKS = (
    check_accounting,
    check_kruskal_oracle,
    check_sampling_tree,
    check_selection_product_formula,
    check_equivalence,
    check_distribution_facts,
    check_mi_values,
    check_parity,
    check_hard_instance,
    check_chi_square_comparator,
)


def run_all():
    return [check() for check in ALL_CHECKS]
