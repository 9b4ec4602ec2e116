"""Bad-triple probabilities and the first-moment construction.

An ordered triple (x, y, z) of vertices is *bad* when
d(y,z) = d(y,x) + d(x,z), i.e. x sits on a shortest y,z-path.  Triples
with x = y or x = z are bad by this reading; y = z with x distinct never
is.  p(G) is the probability that a uniform triple from V(G)^3 is bad;
it multiplies across Cartesian factors, which is what makes the
first-moment bound for powers work: sample M vertices of G^n with
(M-1)(M-2) <= p(G)^-n, delete one vertex from every bad triple, and at
least half the sample survives in general position.

Randomness comes from :class:`SplitMix64`, a 64-bit counter-based
generator: the state advances by a fixed odd constant and each output is
a bijective mix of the state, so runs are reproducible from the seed
alone, independent of platform and Python version.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from math import isqrt, log
from typing import Iterable

import numpy as np

from .graphs import Coord, FactorGraph, ProductGraph, VertexCapError
from .position import GpSet

DEFAULT_DIRECT_CAP = 10**4

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """Seeded 64-bit counter-based generator (SplitMix64 finalizer)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randbelow(self, k: int) -> int:
        """Uniform integer in [0, k) by rejection; no modulo bias."""
        if k <= 0:
            raise ValueError("k must be positive")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            r = self.next64()
            if r < limit:
                return r % k


def _distance_matrix(g: FactorGraph) -> np.ndarray:
    return np.asarray(g.dist, dtype=np.int64)


def _count_bad_triples(D: np.ndarray) -> int:
    """Ordered bad triples over the vertex set of the given distance matrix."""
    total = 0
    for y in range(D.shape[0]):
        row = D[y]
        # bad(x, z): row[z] == row[x] + D[x, z]
        total += int(np.count_nonzero(row[None, :] == row[:, None] + D))
    return total


def p_exact(g: FactorGraph | ProductGraph, cap: int | None = DEFAULT_DIRECT_CAP) -> Fraction:
    """Exact bad-triple probability.

    Factor graphs are counted directly (all n^3 ordered triples, subject
    to ``cap``); products multiply the factor probabilities instead of
    materializing anything.
    """
    if isinstance(g, ProductGraph):
        p = Fraction(1)
        for f in g.factors:
            p *= p_exact(f, cap=cap)
        return p
    if not isinstance(g, FactorGraph):
        raise TypeError(f"expected FactorGraph or ProductGraph, got {type(g).__name__}")
    if cap is not None and g.n > cap:
        raise VertexCapError(f"direct triple count refused for {g.n} vertices (cap {cap})")
    D = _distance_matrix(g)
    return Fraction(_count_bad_triples(D), g.n**3)


def p_exact_restricted(g: FactorGraph, vertices: Iterable[int]) -> Fraction:
    """Bad-triple probability when all three picks are restricted to the
    given vertex subset (e.g. the leaves of a star)."""
    idx = sorted(set(vertices))
    if not idx:
        raise ValueError("restricted vertex set is empty")
    D = _distance_matrix(g)[np.ix_(idx, idx)]
    return Fraction(_count_bad_triples(D), len(idx) ** 3)


def p_closed_form(family: str, size: int) -> Fraction:
    """Known closed forms for p.

    ``family`` is ``"complete"`` (n >= 2), ``"cycle"`` (length >= 3) or
    ``"star_leaf_restricted"`` (k >= 2 leaves, picks restricted to the
    leaves).  The unrestricted star is deliberately unsupported: the
    closed form in circulation overcounts the center case (it misses that
    y = z = same leaf is never bad) and disagrees with enumeration; see
    :func:`star_formula_quoted` and the verification report.
    """
    if family == "complete":
        if size < 2:
            raise ValueError("complete closed form needs n >= 2")
        return Fraction(2 * size - 1, size**2)
    if family == "cycle":
        if size < 3:
            raise ValueError("cycle closed form needs length >= 3")
        if size % 2 == 0:
            k = size // 2
            return Fraction(k * (k + 3) - 1, 4 * k**2)
        k = (size - 1) // 2
        return Fraction(k * (k + 3) + 1, (2 * k + 1) ** 2)
    if family == "star_leaf_restricted":
        if size < 2:
            raise ValueError("leaf-restricted star closed form needs k >= 2")
        return Fraction(2 * size - 1, size**2)
    if family == "star":
        raise ValueError(
            "no closed form for the unrestricted star: the quoted formula "
            "disagrees with direct enumeration (17/27 vs 19/27 at k = 2); "
            "use p_exact, or star_formula_quoted for the discrepancy report"
        )
    raise ValueError(f"unsupported family {family!r}")


def star_formula_quoted(k: int) -> Fraction:
    """The closed form quoted for the unrestricted star with k leaves:
    1/(k+1) + k/(k+1) * (2k+1)/(k+1)^2.

    Kept only so the verification report can document that it disagrees
    with enumeration (p_exact gives 17/27 at k = 2, this gives 19/27).
    """
    if k < 1:
        raise ValueError("star needs k >= 1")
    return Fraction(1, k + 1) + Fraction(k, k + 1) * Fraction(2 * k + 1, (k + 1) ** 2)


def p_power(g: FactorGraph, n: int) -> Fraction:
    """p of the n-fold Cartesian power of g: p(g)^n."""
    if n < 1:
        raise ValueError("power needs n >= 1")
    return p_exact(g) ** n


def choose_M(p: Fraction, n: int) -> int:
    """Largest sample size M >= 3 with (M-1)(M-2) <= p^-n.

    Returns 2 (the trivial guarantee: any two vertices are in general
    position) when even M = 3 fails, i.e. when p^-n < 2.
    """
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError(f"need 0 < p < 1 (got {p})")
    if n < 1:
        raise ValueError("power needs n >= 1")
    target = Fraction(p.denominator, p.numerator) ** n
    if target < 2:
        return 2
    m = isqrt(int(target)) + 3
    while (m - 1) * (m - 2) > target:
        m -= 1
    while m * (m - 1) <= target:
        m += 1
    return m


@dataclass(frozen=True)
class SampleRun:
    """Record of one first-moment sampling run on a Cartesian power.

    ``samples`` preserves the draw order (with repetition); ``bad_triples``
    counts unordered bad triples among the distinct samples; ``deletions``
    lists the vertices removed (one per bad triple still intact when
    visited, lowest first).  ``success`` means the certified remainder
    reached the ceil(M/2) target; removed duplicates count against that
    budget, they are not compensated.
    """

    seed: int
    M: int
    samples: tuple[Coord, ...]
    duplicates: int
    bad_triples: int
    deletions: tuple[Coord, ...]
    result: GpSet
    target: int
    success: bool
    attempts: int


def _one_run(g: FactorGraph, n: int, seed: int, M: int, host: ProductGraph, attempts: int) -> SampleRun:
    rng = SplitMix64(seed)
    samples = tuple(tuple(rng.randbelow(g.n) for _ in range(n)) for _ in range(M))
    distinct = sorted(set(samples))
    dist_table = g.dist

    def d(u: Coord, v: Coord) -> int:
        return sum(dist_table[a][b] for a, b in zip(u, v))

    bad = []
    for u, v, w in combinations(distinct, 3):
        duv, dvw, duw = d(u, v), d(v, w), d(u, w)
        if duw == duv + dvw or dvw == duv + duw or duv == duw + dvw:
            bad.append((u, v, w))

    alive = set(distinct)
    deletions = []
    for u, v, w in bad:  # lex order; u is the lowest member
        if u in alive and v in alive and w in alive:
            alive.remove(u)
            deletions.append(u)

    final = sorted(alive)
    result = GpSet.certify(host, final, note=f"first-moment run, seed {seed}")
    target = (M + 1) // 2
    return SampleRun(
        seed=seed,
        M=M,
        samples=samples,
        duplicates=M - len(distinct),
        bad_triples=len(bad),
        deletions=tuple(deletions),
        result=result,
        target=target,
        success=len(final) >= target,
        attempts=attempts,
    )


def first_moment_construct(
    g: FactorGraph,
    n: int,
    seed: int,
    retries: int = 20,
    sample_size: int | None = None,
) -> SampleRun:
    """Sample-and-delete construction of a general position set in g^n.

    Draws M vertices of the n-th Cartesian power coordinate-wise (M from
    :func:`choose_M` unless overridden), removes duplicates, deletes one
    vertex from every bad triple among the rest, and certifies the
    remainder.  Retries with seed+1, seed+2, ... while the certified set
    stays below ceil(M/2); after ``retries`` extra attempts the best run
    is returned with ``success=False`` (its set is still certified).
    """
    if n < 1:
        raise ValueError("power needs n >= 1")
    if retries < 0:
        raise ValueError("retries must be >= 0")
    M = sample_size if sample_size is not None else choose_M(p_exact(g), n)
    host = ProductGraph([g] * n)
    best: SampleRun | None = None
    for attempt in range(retries + 1):
        run = _one_run(g, n, seed + attempt, M, host, attempts=attempt + 1)
        if run.success:
            return run
        if best is None or len(run.result) > len(best.result):
            best = run
    return replace(best, attempts=retries + 1)


def gp_box_lower_bound(g: FactorGraph | ProductGraph) -> float:
    """Lower bound on the growth exponent of gp under Cartesian powers:
    -(1/2) log p(G) / log |V(G)|, as a float (relative accuracy ~1e-12).

    Always strictly below 1 because p(G) > 1/|V(G)|^2 for connected G.
    """
    nv = g.total_vertices if isinstance(g, ProductGraph) else g.n
    if nv < 2:
        raise ValueError("needs at least 2 vertices")
    p = p_exact(g)
    return 0.5 * (log(p.denominator) - log(p.numerator)) / log(nv)
