"""Geodesic betweenness and general position checking.

A vertex set S is in general position when no three distinct members
x, y, z satisfy d(y,z) = d(y,x) + d(x,z), i.e. none lies on a shortest
path between two others.  Two independent deciders are provided:

* :func:`is_general_position` tests all 3-subsets directly;
* :func:`characterization_check` tests the structural criterion: the
  components induced by S must be cliques forming an intransitive,
  distance-constant partition of S.

The two must agree on every input; the test suite checks this
exhaustively on a corpus of small products.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graphs import Coord, ProductGraph


def _validated_members(g: ProductGraph, S) -> list[Coord]:
    """Canonicalize a vertex collection: in-range tuples, sorted, no dups."""
    members = [g.check_coord(v) for v in S]
    if len(set(members)) != len(members):
        seen = set()
        for v in members:
            if v in seen:
                raise ValueError(f"duplicate vertex {v}")
            seen.add(v)
    return sorted(members)


def is_between(g: ProductGraph, x, y, z) -> bool:
    """True iff x lies on some shortest y,z-path (endpoints included)."""
    x = g.check_coord(x)
    y = g.check_coord(y)
    z = g.check_coord(z)
    return g.distance_unchecked(y, z) == g.distance_unchecked(y, x) + g.distance_unchecked(x, z)


def find_violating_triple(g: ProductGraph, S) -> tuple[Coord, Coord, Coord] | None:
    """First 3-subset of S (lexicographic order) witnessing a violation.

    Returns the triple sorted so that the middle element is first, or
    None when S is in general position.
    """
    members = _validated_members(g, S)
    d = g.distance_unchecked
    for u, v, w in combinations(members, 3):
        duv, dvw, duw = d(u, v), d(v, w), d(u, w)
        if duw == duv + dvw:
            return (v, u, w)
        if dvw == duv + duw:
            return (u, v, w)
        if duv == duw + dvw:
            return (w, u, v)
    return None


def is_general_position(g: ProductGraph, S) -> bool:
    """Decide general position by direct inspection of all 3-subsets."""
    return find_violating_triple(g, S) is None


@dataclass(frozen=True)
class PartitionCertificate:
    """Witness of the structural criterion: clique parts plus the constant
    pairwise distances between them (0 on the diagonal)."""

    parts: tuple[tuple[Coord, ...], ...]
    part_distances: tuple[tuple[int, ...], ...]


def characterization_check(
    g: ProductGraph, S
) -> tuple[bool, PartitionCertificate | None]:
    """Structural general-position test.

    Computes the components of the subgraph induced by S and accepts iff
    every component is a clique, distances between components do not
    depend on the chosen representatives, and no component sits metrically
    between two others.  Agrees with :func:`is_general_position` on every
    input.
    """
    members = _validated_members(g, S)
    m = len(members)
    d = g.distance_unchecked

    # components of the induced subgraph (edges = distance 1)
    comp = [-1] * m
    parts: list[list[Coord]] = []
    for i in range(m):
        if comp[i] >= 0:
            continue
        cid = len(parts)
        stack = [i]
        comp[i] = cid
        bucket = []
        while stack:
            a = stack.pop()
            bucket.append(members[a])
            for b in range(m):
                if comp[b] < 0 and d(members[a], members[b]) == 1:
                    comp[b] = cid
                    stack.append(b)
        parts.append(sorted(bucket))
    parts.sort()

    for part in parts:
        for u, v in combinations(part, 2):
            if d(u, v) != 1:
                return False, None

    p = len(parts)
    dists = [[0] * p for _ in range(p)]
    for i in range(p):
        for j in range(i + 1, p):
            base = d(parts[i][0], parts[j][0])
            for u in parts[i]:
                for v in parts[j]:
                    if d(u, v) != base:
                        return False, None
            dists[i][j] = dists[j][i] = base

    for i in range(p):
        for j in range(p):
            for k in range(p):
                if i == j or j == k or i == k:
                    continue
                if dists[i][k] == dists[i][j] + dists[j][k]:
                    return False, None

    cert = PartitionCertificate(
        parts=tuple(tuple(part) for part in parts),
        part_distances=tuple(tuple(row) for row in dists),
    )
    return True, cert


@dataclass(frozen=True)
class GpSet:
    """A vertex set of a host graph, optionally certified general position."""

    host: ProductGraph
    members: tuple[Coord, ...]
    certified: bool = False
    note: str | None = None

    @classmethod
    def certify(cls, host: ProductGraph, members, note: str | None = None) -> "GpSet":
        """Validate and check the set; raises ValueError with the violating
        triple if it is not in general position."""
        canon = tuple(_validated_members(host, members))
        bad = find_violating_triple(host, canon)
        if bad is not None:
            raise ValueError(f"not a general position set: {bad[0]} lies between {bad[1]} and {bad[2]}")
        return cls(host=host, members=canon, certified=True, note=note)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, v):
        return tuple(v) in self.members


def forbidden_set(g: ProductGraph, X) -> frozenset[Coord]:
    """F(X): vertices outside X whose addition destroys general position.

    ``X`` must itself be in general position (a certified :class:`GpSet`
    is accepted as-is; anything else is checked first).
    """
    if isinstance(X, GpSet) and X.certified and X.host is g:
        members = list(X.members)
    else:
        members = list(GpSet.certify(g, list(X)).members)
    d = g.distance_unchecked
    pairs = list(combinations(members, 2))
    member_set = set(members)
    out = []
    for u in g.vertices():
        if u in member_set:
            continue
        for a, b in pairs:
            dab, dau, dub = d(a, b), d(a, u), d(u, b)
            if dab == dau + dub or dau == dab + dub or dub == dau + dab:
                out.append(u)
                break
    return frozenset(out)


def independence_check(g: ProductGraph, S) -> bool:
    """True iff no two members of S are adjacent in g."""
    members = [g.check_coord(v) for v in S]
    d = g.distance_unchecked
    return all(d(u, v) != 1 for u, v in combinations(set(members), 2))
