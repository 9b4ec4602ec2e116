"""Exact gp-number computation and gp-set enumeration.

The search is a depth-first branch and bound over vertices in flat-index
order.  A precomputed :class:`BadTripleIndex` stores, for every vertex
pair, the bitset of vertices completing a bad triple with that pair;
extending the current set by v filters the candidate set with one AND per
already-chosen vertex.  Subtrees that cannot beat (or, when counting,
cannot tie) the incumbent are cut with the bound |S| + |candidates|.

Determinism: vertices are branched in increasing flat index, so the
reported witness is the lexicographically first maximum set, and the
result is identical for 1 and N worker processes.  Parallel runs split
the search on the first two chosen vertices; workers share a monotone
best-size bound that only prunes subtrees unable to *tie* the global
best, which preserves each task's lexicographically first witness.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from multiprocessing import get_context

import numpy as np

from .graphs import Coord, FactorGraph, ProductGraph, VertexCapError
from .position import GpSet

DEFAULT_SEARCH_CAP = 200
DEFAULT_ENUM_CAP = 64

_TIME_CHECK_MASK = 0x3FF  # budget clock polled every 1024 nodes


class BudgetExhausted(Exception):
    """Internal: unwinds the search when a node/time budget runs out."""


@dataclass(frozen=True)
class SearchLimits:
    """Optional search budget; omitted fields are unlimited."""

    max_nodes: int | None = None
    time_limit: float | None = None  # seconds


@dataclass(frozen=True)
class SearchResult:
    """Outcome of an exact search.

    ``complete`` is False when a budget ran out; then ``gp_value`` is only
    the best size found, never claimed maximum.
    """

    gp_value: int
    witness: GpSet
    nodes_explored: int
    elapsed: float
    complete: bool
    max_set_count: int | None = None

    def __str__(self):
        status = "" if self.complete else " (budget exhausted; best found)"
        return f"gp = {self.gp_value}{status}, witness {list(self.witness)}"


def flat_distance_matrix(g: ProductGraph, cap: int | None = 20000) -> np.ndarray:
    """Dense distance matrix on flat indices, assembled additively from the
    factor tables.  Scratch data for index building; products themselves
    never cache this."""
    n = g.total_vertices
    if cap is not None and n > cap:
        raise VertexCapError(f"distance matrix refused for {n} vertices (cap {cap})")
    D = np.zeros((n, n), dtype=np.int32)
    flat = np.arange(n)
    for f, stride, size in zip(g.factors, g._strides, g._sizes):
        c = (flat // stride) % size
        Df = np.asarray(f.dist, dtype=np.int32)
        D += Df[c[:, None], c[None, :]]
    return D


def _pack_rows(rows: np.ndarray) -> list[int]:
    """Pack boolean rows into Python-int bitsets (bit i = row[i])."""
    packed = np.packbits(rows, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


class BadTripleIndex:
    """Pair-indexed bitsets describing all bad triples of a host graph.

    ``between(y, z)`` holds the vertices strictly between y and z;
    ``bad_with(a, b)`` holds every u such that {a, b, u} is a bad triple,
    whichever of the three is in the middle.
    """

    __slots__ = ("n", "_between", "_bad_with")

    def __init__(self, n: int, between: list[list[int]], bad_with: list[list[int]]):
        self.n = n
        self._between = between
        self._bad_with = bad_with

    @classmethod
    def build(cls, g: ProductGraph | np.ndarray, cap: int | None = DEFAULT_SEARCH_CAP) -> "BadTripleIndex":
        if isinstance(g, np.ndarray):
            D = g
        else:
            D = flat_distance_matrix(g, cap=cap)
        n = D.shape[0]
        # btw[x, y, z]: x strictly between y and z
        btw = D[None, :, :] == D[:, :, None] + D[:, None, :]
        idx = np.arange(n)
        btw[idx, idx, :] = False
        btw[idx, :, idx] = False
        between_rows = np.transpose(btw, (1, 2, 0)).reshape(n * n, n)
        bad = (
            np.transpose(btw, (1, 2, 0))
            | np.transpose(btw, (0, 2, 1))
            | np.transpose(btw, (1, 0, 2))
        ).reshape(n * n, n)
        between_flat = _pack_rows(between_rows)
        bad_flat = _pack_rows(bad)
        between = [between_flat[i * n:(i + 1) * n] for i in range(n)]
        bad_with = [bad_flat[i * n:(i + 1) * n] for i in range(n)]
        return cls(n, between, bad_with)

    def between_mask(self, y: int, z: int) -> int:
        return self._between[y][z]

    def between(self, y: int, z: int) -> set[int]:
        return _bits(self._between[y][z])

    def bad_with_mask(self, a: int, b: int) -> int:
        return self._bad_with[a][b]

    def bad_with(self, a: int, b: int) -> set[int]:
        return _bits(self._bad_with[a][b])

    def allowed_tables(self) -> list[list[int]]:
        """Complement masks: allowed[a][b] = vertices NOT completing a bad
        triple with the pair (a, b).  This is what the search intersects."""
        full = (1 << self.n) - 1
        return [[full & ~m for m in row] for row in self._bad_with]


def _bits(mask: int) -> set[int]:
    out = set()
    while mask:
        b = mask & -mask
        out.add(b.bit_length() - 1)
        mask ^= b
    return out


# ----------------------------------------------------------------------
# sequential engines

def _run_max(allowed, start_sets, best, witness, limits, shared=None):
    """DFS for one maximum set.  ``start_sets`` yields (S, cand) roots.

    Returns (best, witness, nodes, complete); witness is the lex-first
    set among those of maximum size reachable from the given roots.
    """
    nodes = 0
    complete = True
    deadline = None
    max_nodes = None
    if limits is not None:
        max_nodes = limits.max_nodes
        if limits.time_limit is not None:
            deadline = time.monotonic() + limits.time_limit

    def rec(S, rows, cand):
        nonlocal best, witness, nodes
        k = len(S)
        while cand:
            pot = k + cand.bit_count()
            if pot <= best:
                return
            if shared is not None and pot < shared.value:
                return
            bit = cand & -cand
            cand ^= bit
            v = bit.bit_length() - 1
            nodes += 1
            if max_nodes is not None and nodes >= max_nodes:
                raise BudgetExhausted
            if deadline is not None and nodes & _TIME_CHECK_MASK == 0 and time.monotonic() > deadline:
                raise BudgetExhausted
            nc = cand
            for row in rows:
                nc &= row[v]
            S.append(v)
            if k + 1 > best:
                best = k + 1
                witness = S.copy()
                if shared is not None and best > shared.value:
                    with shared.get_lock():
                        if best > shared.value:
                            shared.value = best
            if nc:
                rows.append(allowed[v])
                rec(S, rows, nc)
                rows.pop()
            S.pop()

    try:
        for S0, cand0 in start_sets:
            rows0 = [allowed[v] for v in S0]
            rec(list(S0), rows0, cand0)
    except BudgetExhausted:
        complete = False
    return best, witness, nodes, complete


def _run_count(allowed, n, limits):
    """DFS counting every general position set of maximum size."""
    best = 0
    count = 1  # the empty set, displaced as soon as best grows
    witness: list[int] = []
    nodes = 0
    complete = True
    deadline = None
    max_nodes = None
    if limits is not None:
        max_nodes = limits.max_nodes
        if limits.time_limit is not None:
            deadline = time.monotonic() + limits.time_limit

    def rec(S, rows, cand):
        nonlocal best, count, witness, nodes
        k = len(S)
        while cand:
            if k + cand.bit_count() < best:
                return
            bit = cand & -cand
            cand ^= bit
            v = bit.bit_length() - 1
            nodes += 1
            if max_nodes is not None and nodes >= max_nodes:
                raise BudgetExhausted
            if deadline is not None and nodes & _TIME_CHECK_MASK == 0 and time.monotonic() > deadline:
                raise BudgetExhausted
            nc = cand
            for row in rows:
                nc &= row[v]
            if k + 1 > best:
                best = k + 1
                count = 1
                witness = S + [v]
            elif k + 1 == best:
                count += 1
            if nc and k + 1 + nc.bit_count() >= best:
                S.append(v)
                rows.append(allowed[v])
                rec(S, rows, nc)
                rows.pop()
                S.pop()

    try:
        rec([], [], (1 << n) - 1)
    except BudgetExhausted:
        complete = False
    return best, count, witness, nodes, complete


# ----------------------------------------------------------------------
# parallel driver

_WORKER: dict = {}


def _init_worker(allowed, shared, deadline_wall):
    _WORKER["allowed"] = allowed
    _WORKER["shared"] = shared
    _WORKER["deadline"] = deadline_wall


def _worker_task(task):
    v1, v2, cand = task
    allowed = _WORKER["allowed"]
    limits = None
    if _WORKER["deadline"] is not None:
        remaining = _WORKER["deadline"] - time.time()
        if remaining <= 0:
            return 2, [v1, v2], 0, False
        limits = SearchLimits(time_limit=remaining)
    best, witness, nodes, complete = _run_max(
        allowed, [([v1, v2], cand)], 2, [v1, v2], limits, shared=_WORKER["shared"]
    )
    return best, witness, nodes, complete


def _parallel_max(allowed, n, threads, limits):
    full = (1 << n) - 1
    tasks = []
    for v1 in range(n):
        for v2 in range(v1 + 1, n):
            cand = (full >> (v2 + 1)) << (v2 + 1)
            cand &= allowed[v1][v2]
            tasks.append((v1, v2, cand))
    deadline_wall = None
    if limits is not None and limits.time_limit is not None:
        deadline_wall = time.time() + limits.time_limit
    if limits is not None and limits.max_nodes is not None:
        raise ValueError("max_nodes budgets are only supported single-threaded")

    ctx = get_context()
    shared = ctx.Value("q", 0)
    best, witness = 2, [0, 1]
    nodes_total = 0
    complete = True
    with ProcessPoolExecutor(
        max_workers=threads,
        mp_context=ctx,
        initializer=_init_worker,
        initargs=(allowed, shared, deadline_wall),
    ) as pool:
        for tbest, twitness, tnodes, tcomplete in pool.map(_worker_task, tasks, chunksize=8):
            nodes_total += tnodes
            complete &= tcomplete
            if tbest > best or (tbest == best and twitness < witness):
                best, witness = tbest, twitness
    return best, witness, nodes_total, complete


# ----------------------------------------------------------------------
# public operations

def _as_product(g) -> ProductGraph:
    if isinstance(g, ProductGraph):
        return g
    if isinstance(g, FactorGraph):
        return ProductGraph([g])
    raise TypeError(f"expected ProductGraph or FactorGraph, got {type(g).__name__}")


def gp_exact(
    g,
    limits: SearchLimits | None = None,
    threads: int = 1,
    cap: int | None = DEFAULT_SEARCH_CAP,
) -> SearchResult:
    """Exact maximum general position set of ``g``.

    Deterministic: the witness is the lexicographically first maximum set
    in flat-index order regardless of ``threads``.  With a budget, an
    exhausted search returns ``complete=False`` and the best set found.
    """
    g = _as_product(g)
    n = g.total_vertices
    if cap is not None and n > cap:
        raise VertexCapError(f"exact search refused for {n} vertices (cap {cap})")
    started = time.monotonic()
    index = BadTripleIndex.build(g, cap=cap)
    allowed = index.allowed_tables()

    if n == 1:
        witness, best, nodes, complete = [0], 1, 1, True
    elif threads > 1 and n >= 3:
        best, witness, nodes, complete = _parallel_max(allowed, n, threads, limits)
    else:
        best, witness, nodes, complete = _run_max(
            allowed, [([], (1 << n) - 1)], 0, [], limits
        )
    elapsed = time.monotonic() - started
    members = [g.decode(i) for i in witness]
    return SearchResult(
        gp_value=best,
        witness=GpSet.certify(g, members, note="solver witness"),
        nodes_explored=nodes,
        elapsed=elapsed,
        complete=complete,
    )


def count_maximum_gp_sets(
    g,
    cap: int | None = DEFAULT_ENUM_CAP,
    limits: SearchLimits | None = None,
) -> tuple[int, int]:
    """(gp value, number of distinct maximum general position sets)."""
    g = _as_product(g)
    n = g.total_vertices
    if cap is not None and n > cap:
        raise VertexCapError(f"enumeration refused for {n} vertices (cap {cap})")
    index = BadTripleIndex.build(g, cap=cap)
    allowed = index.allowed_tables()
    best, count, _, _, complete = _run_count(allowed, n, limits)
    if not complete:
        raise BudgetExhausted(f"enumeration budget exhausted; best found {best}")
    return best, count


def enumerate_maximum_gp_sets(g, cap: int | None = DEFAULT_ENUM_CAP) -> tuple[int, list[tuple[Coord, ...]]]:
    """All maximum general position sets, as sorted coordinate tuples.

    Convenience for property checks on small hosts; the count always
    matches :func:`count_maximum_gp_sets`.
    """
    g = _as_product(g)
    n = g.total_vertices
    if cap is not None and n > cap:
        raise VertexCapError(f"enumeration refused for {n} vertices (cap {cap})")
    index = BadTripleIndex.build(g, cap=cap)
    allowed = index.allowed_tables()
    best, _, _, _, _ = _run_count(allowed, n, None)

    out: list[tuple[Coord, ...]] = []

    def rec(S, rows, cand):
        k = len(S)
        while cand:
            if k + cand.bit_count() < best:
                return
            bit = cand & -cand
            cand ^= bit
            v = bit.bit_length() - 1
            nc = cand
            for row in rows:
                nc &= row[v]
            if k + 1 == best:
                out.append(tuple(g.decode(i) for i in S + [v]))
            if nc and k + 1 + nc.bit_count() >= best:
                S.append(v)
                rows.append(allowed[v])
                rec(S, rows, nc)
                rows.pop()
                S.pop()

    rec([], [], (1 << n) - 1)
    return best, out


def _induced_subgraph(g: ProductGraph, D: np.ndarray, flats: list[int]):
    """Explicit induced subgraph on the given flat indices; raises if it is
    disconnected or not isometric in g (reporting a violating pair)."""
    pos = {v: i for i, v in enumerate(flats)}
    adj = [[] for _ in flats]
    for i, u in enumerate(flats):
        for v in flats[i + 1:]:
            if D[u, v] == 1:
                adj[i].append(pos[v])
                adj[pos[v]].append(i)
    try:
        sub = FactorGraph.explicit(adj)
    except ValueError as exc:
        raise ValueError(f"cover set is not usable: {exc}") from exc
    for i, u in enumerate(flats):
        row = sub.dist[i]
        for j in range(i + 1, len(flats)):
            if row[j] != D[u, flats[j]]:
                raise ValueError(
                    f"subgraph not isometric: pair {g.decode(u)}, {g.decode(flats[j])} "
                    f"has induced distance {row[j]} but host distance {D[u, flats[j]]}"
                )
    return sub


def isometric_cover_bound(
    g,
    cover,
    limits: SearchLimits | None = None,
    threads: int = 1,
) -> int:
    """Upper bound on gp(g) from an isometric cover.

    Each element of ``cover`` is a collection of coordinate tuples.  Every
    set must induce a connected isometric subgraph and together they must
    cover all vertices; the bound is the sum of the exact gp values of the
    induced subgraphs.
    """
    g = _as_product(g)
    D = flat_distance_matrix(g)
    flat_sets = []
    covered: set[int] = set()
    for raw in cover:
        flats = sorted({g.encode(v) for v in raw})
        if not flats:
            raise ValueError("empty cover set")
        flat_sets.append(flats)
        covered.update(flats)
    if len(covered) != g.total_vertices:
        missing = next(i for i in range(g.total_vertices) if i not in covered)
        raise ValueError(f"cover misses vertex {g.decode(missing)}")
    total = 0
    for flats in flat_sets:
        sub = _induced_subgraph(g, D, flats)
        total += gp_exact(ProductGraph([sub]), limits=limits, threads=threads).gp_value
    return total
