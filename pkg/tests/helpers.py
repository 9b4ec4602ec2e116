"""Shared independent oracles for the test suite.

Everything in here deliberately avoids the solver's bitset engine and the
additive distance path: distances come from BFS on the materialized
product, subsets from itertools.  Slow but unarguable.
"""

from __future__ import annotations

from itertools import combinations

from genpos.graphs import ProductGraph, explicit_adjacency


def bfs_distance_table(g: ProductGraph):
    """All-pairs distances of a product via BFS on its explicit form."""
    return explicit_adjacency(g).dist


def triple_is_bad(D, u: int, v: int, w: int) -> bool:
    return (
        D[u][w] == D[u][v] + D[v][w]
        or D[v][w] == D[v][u] + D[u][w]
        or D[u][v] == D[u][w] + D[w][v]
    )


def subset_in_general_position(D, subset) -> bool:
    return not any(triple_is_bad(D, u, v, w) for u, v, w in combinations(subset, 3))


def naive_gp(g: ProductGraph) -> int:
    """Maximum general position set size by plain subset enumeration.

    Grows k until no k-subset qualifies; valid because subsets of general
    position sets stay in general position.
    """
    D = bfs_distance_table(g)
    n = len(D)
    best = min(n, 2)
    k = best + 1
    while k <= n:
        if not any(
            subset_in_general_position(D, sub) for sub in combinations(range(n), k)
        ):
            break
        best = k
        k += 1
    return best


def naive_count_maximum(g: ProductGraph) -> tuple[int, int]:
    """(gp value, count of maximum sets) by plain subset enumeration."""
    D = bfs_distance_table(g)
    n = len(D)
    best, count = 0, 0
    for k in range(1, n + 1):
        c = sum(
            1 for sub in combinations(range(n), k) if subset_in_general_position(D, sub)
        )
        if c == 0:
            break
        best, count = k, c
    return best, count
