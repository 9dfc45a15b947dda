"""Deterministic constructors for the test corpus: sphere-like posets, a
non-orientable negative control, and a join combinator."""

from __future__ import annotations

from itertools import combinations

import networkx as nx

from .poset import SimplicialPoset


def from_complex(name: str, facets) -> SimplicialPoset:
    """Face poset of the simplicial complex generated by the given facets.

    Elements are all subsets of the facets (the empty set is the bottom);
    ids are assigned by (size, vertex tuple), so output is canonical.
    """
    faces = {()}
    stack = [tuple(sorted(set(f))) for f in facets]
    while stack:
        f = stack.pop()
        if f in faces:
            continue
        faces.add(f)
        for i in range(len(f)):
            stack.append(f[:i] + f[i + 1:])
    ordered = sorted(faces, key=lambda f: (len(f), f))
    ids = {f: i for i, f in enumerate(ordered)}
    ranks = [len(f) for f in ordered]
    covers = [[ids[f[:i] + f[i + 1:]] for i in range(len(f))] for f in ordered]
    return SimplicialPoset(name, ranks, covers)


def boundary_simplex(d: int) -> SimplicialPoset:
    """Face poset of the boundary of the d-simplex: d+1 vertices, all proper
    subsets as faces."""
    if d < 1:
        raise ValueError("d must be >= 1")
    verts = range(1, d + 2)
    facets = combinations(verts, d)
    return from_complex(f"boundary_simplex({d})", facets)


def doubled_sphere(d: int) -> SimplicialPoset:
    """Two (d-1)-simplices glued along their whole boundary: every proper
    subset of d vertices once, plus two distinct top elements."""
    if d < 1:
        raise ValueError("d must be >= 1")
    boundary = []
    for s in range(d):
        boundary.extend(combinations(range(1, d + 1), s))
    boundary.sort(key=lambda f: (len(f), f))
    ids = {f: i for i, f in enumerate(boundary)}
    ranks = [len(f) for f in boundary]
    covers = [[ids[f[:i] + f[i + 1:]] for i in range(len(f))] for f in boundary]
    ridge_ids = [ids[f] for f in combinations(range(1, d + 1), d - 1)]
    for _ in range(2):
        ranks.append(d)
        covers.append(sorted(ridge_ids))
    return SimplicialPoset(f"doubled_sphere({d})", ranks, covers)


def cross_polytope(d: int) -> SimplicialPoset:
    """Face poset of the boundary of the d-dimensional cross-polytope:
    2d vertices in antipodal pairs, faces pick at most one per pair."""
    if d < 1:
        raise ValueError("d must be >= 1")
    verts = []
    for j in range(1, d + 1):
        verts.extend([(j, 1), (j, -1)])
    facets = []
    for signs in _sign_vectors(d):
        facets.append(tuple((j + 1, s) for j, s in enumerate(signs)))
    labels = {v: i + 1 for i, v in enumerate(sorted(verts))}
    return from_complex(f"cross_polytope({d})",
                        [tuple(sorted(labels[v] for v in f)) for f in facets])


def _sign_vectors(d: int):
    if d == 0:
        yield ()
        return
    for rest in _sign_vectors(d - 1):
        yield rest + (1,)
        yield rest + (-1,)


# Minimal 6-vertex triangulation of the real projective plane (antipodal
# icosahedron): complete 1-skeleton, 10 triangles, every edge in exactly two.
RP2_FACETS = (
    (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
    (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6),
)


def rp2() -> SimplicialPoset:
    """Face poset of the minimal projective-plane triangulation; valid as a
    simplicial poset but neither a rational homology sphere nor orientable."""
    return from_complex("rp2", RP2_FACETS)


def join(p: SimplicialPoset, q: SimplicialPoset) -> SimplicialPoset:
    """Join of simplicial posets: elements are pairs, order and covers are
    componentwise, ranks add."""
    pairs = [(a, b) for a in p.elements() for b in q.elements()]
    pairs.sort(key=lambda ab: (p.ranks[ab[0]] + q.ranks[ab[1]], ab))
    ids = {ab: i for i, ab in enumerate(pairs)}
    ranks = []
    covers = []
    for a, b in pairs:
        ranks.append(p.ranks[a] + q.ranks[b])
        cov = [ids[(ca, b)] for ca in p.lower_covers[a]]
        cov += [ids[(a, cb)] for cb in q.lower_covers[b]]
        covers.append(sorted(cov))
    return SimplicialPoset(f"join({p.name},{q.name})", ranks, covers)


def point_poset() -> SimplicialPoset:
    """The one-element poset, the unit for join."""
    return SimplicialPoset("point", [0], [[]])


def is_isomorphic(p: SimplicialPoset, q: SimplicialPoset) -> bool:
    """Poset isomorphism via rank-labelled Hasse-diagram matching."""
    if p.n_elements != q.n_elements or sorted(p.ranks) != sorted(q.ranks):
        return False

    def digraph(s: SimplicialPoset) -> nx.DiGraph:
        g = nx.DiGraph()
        for e in s.elements():
            g.add_node(e, rank=s.ranks[e])
        for e in s.elements():
            for c in s.lower_covers[e]:
                g.add_edge(c, e)
        return g

    matcher = nx.algorithms.isomorphism.DiGraphMatcher(
        digraph(p), digraph(q),
        node_match=lambda a, b: a["rank"] == b["rank"])
    return matcher.is_isomorphic()


def corpus() -> dict[str, SimplicialPoset]:
    """The built-in test corpus, in a fixed order.

    All entries except rp2 are sphere-like; the joins cover rank 4 and 5 and
    include every way our generators produce an interior zero in the
    h-vector.
    """
    ds = {d: doubled_sphere(d) for d in (1, 2, 3, 4)}
    posets = [
        boundary_simplex(2),
        boundary_simplex(3),
        boundary_simplex(4),
        ds[1], ds[2], ds[3], ds[4],
        cross_polytope(2),
        cross_polytope(3),
        join(ds[2], ds[2]),
        join(ds[3], ds[1]),
        join(ds[1], ds[3]),
        join(ds[2], ds[3]),
        join(ds[4], ds[1]),
        rp2(),
    ]
    return {p.name: p for p in posets}


def corpus_positives() -> dict[str, SimplicialPoset]:
    return {k: v for k, v in corpus().items() if k != "rp2"}
