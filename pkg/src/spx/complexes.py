"""Order complexes, exact rational homology, Gorenstein* certification, and
pseudomanifold orientation.

Homology is computed from simplicial boundary matrices with the fraction-free
rank routine, so every betti number here is an exact integer.  The sphere
test behind the Gorenstein* certificate examines the link of every face of
the order complex; links of chains split as joins of order complexes of open
subintervals, and reduced betti numbers over a field multiply across joins
(with a degree shift), which is what makes the certificate affordable.  The
factorization is cross-checked against directly-built links in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import matrix_rank
from .poset import NonPureError, SimplicialPoset, ensure_validated


class SimplicialComplex:
    """Faces stored by dimension as sorted vertex tuples, subset-closed.

    The empty face is always present at dimension -1; a complex with nothing
    else is the (-1)-sphere.
    """

    def __init__(self, faces_by_dim: dict[int, tuple]):
        self.faces_by_dim = {q: tuple(sorted(set(fs)))
                             for q, fs in faces_by_dim.items() if fs}
        self.faces_by_dim.setdefault(-1, ((),))
        self.dim = max(self.faces_by_dim)
        self.vertices = tuple(v for (v,) in self.faces_by_dim.get(0, ()))
        self._cache: dict = {}

    @classmethod
    def from_facets(cls, facets) -> "SimplicialComplex":
        """Downward closure of the given faces."""
        seen = {()}
        stack = [tuple(sorted(set(f))) for f in facets]
        while stack:
            f = stack.pop()
            if f in seen:
                continue
            seen.add(f)
            for i in range(len(f)):
                stack.append(f[:i] + f[i + 1:])
        by_dim: dict[int, list] = {}
        for f in seen:
            by_dim.setdefault(len(f) - 1, []).append(f)
        return cls({q: tuple(fs) for q, fs in by_dim.items()})

    def faces(self, q: int) -> tuple:
        return self.faces_by_dim.get(q, ())

    def n_faces(self, q: int) -> int:
        return len(self.faces_by_dim.get(q, ()))

    def all_faces(self):
        for q in sorted(self.faces_by_dim):
            yield from self.faces_by_dim[q]

    def is_empty(self) -> bool:
        return self.dim == -1

    def f_vector(self) -> tuple[int, ...]:
        return tuple(self.n_faces(q) for q in range(self.dim + 1))

    def has_face(self, face) -> bool:
        f = tuple(sorted(face))
        return f in set(self.faces_by_dim.get(len(f) - 1, ()))

    def link(self, face) -> "SimplicialComplex":
        """Direct link computation; quadratic, used at desk scale and as an
        oracle for the factorized link homology."""
        sigma = set(face)
        by_dim: dict[int, list] = {}
        for f in self.all_faces():
            if sigma & set(f):
                continue
            union = tuple(sorted(sigma | set(f)))
            if self.has_face(union):
                by_dim.setdefault(len(f) - 1, []).append(f)
        return SimplicialComplex({q: tuple(fs) for q, fs in by_dim.items()})

    def euler_characteristic_reduced(self) -> int:
        """Alternating face-count sum including the empty face."""
        return sum((-1) ** q * self.n_faces(q) for q in range(-1, self.dim + 1))

    def boundary_rows(self, q: int) -> list[dict[int, int]]:
        """The boundary map on q-faces as sparse rows over (q-1)-face indices.

        q = 0 is the augmentation onto the empty face.
        """
        lower_index = {f: i for i, f in enumerate(self.faces(q - 1))}
        rows = []
        for f in self.faces(q):
            row = {}
            for k in range(len(f)):
                face = f[:k] + f[k + 1:]
                row[lower_index[face]] = 1 if k % 2 == 0 else -1
            rows.append(row)
        return rows

    def boundary_rank(self, q: int) -> int:
        key = ("brank", q)
        if key not in self._cache:
            self._cache[key] = matrix_rank(self.boundary_rows(q))
        return self._cache[key]

    def export_triplets(self) -> str:
        """Plain-text dump of all boundary matrices: lines 'q row col value',
        with faces listed first, for external verification."""
        lines = []
        for q in range(self.dim + 1):
            for i, f in enumerate(self.faces(q)):
                lines.append(f"face {q} {i} {','.join(map(str, f))}")
        for q in range(self.dim + 1):
            for col, row in enumerate(self.boundary_rows(q)):
                for r, v in sorted(row.items()):
                    lines.append(f"d {q} {r} {col} {v}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim {self.dim}, f={self.f_vector()})"


def betti_profile(complex_: SimplicialComplex) -> dict[int, int]:
    """Reduced betti numbers over Q as a sparse {degree: rank} dict.

    Degree -1 appears (with value 1) exactly for the empty complex.
    """
    if "betti" in complex_._cache:
        return complex_._cache["betti"]
    ranks = {q: complex_.boundary_rank(q) for q in range(complex_.dim + 2)}
    n = {q: complex_.n_faces(q) for q in range(-1, complex_.dim + 1)}
    profile = {}
    for q in range(-1, complex_.dim + 1):
        b = n[q] - ranks.get(q, 0) - ranks.get(q + 1, 0)
        if b:
            profile[q] = b
    complex_._cache["betti"] = profile
    return profile


def reduced_betti(complex_: SimplicialComplex) -> tuple[int, ...]:
    """(b_0, ..., b_dim); () for the empty complex, whose only reduced
    homology sits in degree -1 (see betti_profile)."""
    profile = betti_profile(complex_)
    return tuple(profile.get(q, 0) for q in range(complex_.dim + 1))


# -- order complexes ---------------------------------------------------------


def _chains_within(poset: SimplicialPoset, member_mask: int) -> list[tuple[int, ...]]:
    """All nonempty chains using only elements in member_mask (id bitmask)."""
    members = [e for e in poset.elements() if member_mask >> e & 1]
    upper = {e: [v for v in poset.strictly_above(e) if member_mask >> v & 1]
             for e in members}
    chains = []

    def extend(chain, top):
        chains.append(tuple(chain))
        for v in upper[top]:
            chain.append(v)
            extend(chain, v)
            chain.pop()

    # a chain is generated exactly once, from its minimum element upward
    for e in sorted(members, key=lambda x: (poset.ranks[x], x)):
        extend([e], e)
    return chains


def _chain_complex(poset: SimplicialPoset, member_mask: int) -> SimplicialComplex:
    by_dim: dict[int, list] = {}
    for chain in _chains_within(poset, member_mask):
        by_dim.setdefault(len(chain) - 1, []).append(tuple(sorted(chain)))
    return SimplicialComplex({q: tuple(fs) for q, fs in by_dim.items()})


def order_complex(poset: SimplicialPoset) -> SimplicialComplex:
    """The complex of chains of the poset minus its bottom element."""
    ensure_validated(poset)
    if "order_complex" not in poset._cache:
        all_mask = (1 << poset.n_elements) - 1
        poset._cache["order_complex"] = _chain_complex(poset, all_mask & ~1)
    return poset._cache["order_complex"]


def _gap_profile(poset: SimplicialPoset, a: int, b: int | None):
    """(dim, betti profile) of the order complex of the open slice
    {v : a < v < b} (b None means no upper constraint)."""
    cache = poset._cache.setdefault("gap_profiles", {})
    key = (a, b)
    if key not in cache:
        mask = poset._above[a] & ~(1 << a)
        if b is not None:
            mask &= poset._below[b] & ~(1 << b)
        k = _chain_complex(poset, mask)
        cache[key] = (k.dim, betti_profile(k))
    return cache[key]


def _join_profile(parts):
    """Combine (dim, betti) data of factors under simplicial join.

    Over a field, reduced homology of a join is the convolution of the
    factors' reduced homology shifted by one degree; dimensions add the same
    way.  The empty complex (profile {-1: 1}) is the neutral element.
    """
    dim = -1
    betti = {-1: 1}
    for fdim, fprof in parts:
        dim = dim + fdim + 1
        combined: dict[int, int] = {}
        for qa, va in betti.items():
            for qb, vb in fprof.items():
                q = qa + qb + 1
                combined[q] = combined.get(q, 0) + va * vb
        betti = combined
    return dim, betti


# -- Gorenstein* certification ----------------------------------------------


@dataclass
class GorensteinReport:
    name: str
    passed: bool
    rank: int
    faces_checked: int = 0
    witness_chain: tuple | None = None
    witness_expected_dim: int | None = None
    witness_actual_dim: int | None = None
    witness_betti: dict | None = None
    complex_betti: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {
            "name": self.name,
            "pass": self.passed,
            "rank": self.rank,
            "faces_checked": self.faces_checked,
            "order_complex_betti": {str(q): v for q, v in sorted(self.complex_betti.items())},
        }
        if not self.passed:
            out["witness"] = {
                "chain": list(self.witness_chain or ()),
                "expected_dim": self.witness_expected_dim,
                "actual_dim": self.witness_actual_dim,
                "link_betti": {str(q): v for q, v in sorted((self.witness_betti or {}).items())},
            }
        return out


def is_gorenstein_star(poset: SimplicialPoset) -> GorensteinReport:
    """Decide whether the order complex has the homology of a sphere locally
    and globally: for every face (the empty one included) the link must be a
    rational homology sphere of the complementary dimension.

    The poset must be pure; certification iterates faces by dimension and
    stops at the first failure, which becomes the witness.
    """
    ensure_validated(poset)
    if not poset.is_pure:
        raise NonPureError(f"{poset.name}: maximal elements below rank {poset.rank}")
    d = poset.rank
    delta = order_complex(poset)
    whole = (delta.dim, betti_profile(delta))
    checked = 0
    witness = None
    for q in range(-1, delta.dim + 1):
        for face in delta.faces(q):
            chain = tuple(sorted(face, key=lambda e: poset.ranks[e]))
            bounds = (0,) + chain + (None,)
            parts = [_gap_profile(poset, bounds[i], bounds[i + 1])
                     for i in range(len(bounds) - 1)]
            dim, prof = _join_profile(parts)
            checked += 1
            expected_dim = d - 1 - len(chain)
            if dim != expected_dim or prof != {expected_dim: 1}:
                witness = (chain, expected_dim, dim, prof)
                break
        if witness:
            break
    if witness:
        chain, expected_dim, dim, prof = witness
        return GorensteinReport(poset.name, False, d, checked, chain,
                                expected_dim, dim, prof, whole[1])
    return GorensteinReport(poset.name, True, d, checked,
                            complex_betti=whole[1])


# -- pseudomanifold structure and orientation --------------------------------


@dataclass
class RidgeReport:
    name: str
    passed: bool
    violations: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "violations": [{"ridge": z, "facets": c} for z, c in self.violations],
        }


def check_two_facets_per_ridge(poset: SimplicialPoset) -> RidgeReport:
    """Every rank-(d-1) element must sit below exactly two facets."""
    ensure_validated(poset)
    if not poset.is_pure:
        raise NonPureError(f"{poset.name}: not pure")
    d = poset.rank
    violations = []
    for z in poset.elements_by_rank.get(d - 1, ()):
        count = sum(1 for y in poset.facets if poset.le(z, y))
        if count != 2:
            violations.append((z, count))
    return RidgeReport(poset.name, not violations, tuple(violations))


class NonOrientableError(Exception):
    def __init__(self, ridge: int, detail: str = ""):
        super().__init__(f"orientation contradiction at ridge {ridge} {detail}".rstrip())
        self.ridge = ridge


@dataclass
class OrientationData:
    """Vertex order and sign per facet such that the signed sum of oriented
    facets has cancelling boundary on every ridge."""

    orders: dict[int, tuple[int, ...]]
    signs: dict[int, int]
    components: tuple[tuple[int, ...], ...]

    def to_json_dict(self) -> dict:
        return {
            "orders": {str(y): list(o) for y, o in sorted(self.orders.items())},
            "signs": {str(y): s for y, s in sorted(self.signs.items())},
            "components": [list(c) for c in self.components],
        }


def _perm_sign(seq) -> int:
    """Sign of the permutation sorting seq (entries distinct)."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _incidence_sign(order: tuple[int, ...], drop_atom: int) -> int:
    """Coefficient of the increasing-ordered ridge face in the boundary of the
    oriented facet simplex with the given vertex order."""
    k = order.index(drop_atom)
    rest = order[:k] + order[k + 1:]
    return (1 if k % 2 == 0 else -1) * _perm_sign(rest)


def orient(poset: SimplicialPoset) -> OrientationData:
    """Propagate facet signs across ridges and verify the result.

    Facet vertex orders are increasing atom ids.  Signs are seeded with +1 at
    the lowest-id facet of each adjacency component and spread breadth-first;
    any inconsistent non-tree adjacency raises NonOrientableError with the
    offending ridge.  After propagation every ridge is re-checked, so a
    returned orientation is a verified cycle.
    """
    ridge_report = check_two_facets_per_ridge(poset)
    if not ridge_report.passed:
        z, c = ridge_report.violations[0]
        raise NonPureError(
            f"{poset.name}: ridge {z} lies under {c} facets, need exactly 2")
    d = poset.rank
    orders = {y: poset.atom_set(y) for y in poset.facets}

    ridge_facets = {}
    for z in poset.elements_by_rank.get(d - 1, ()):
        pair = tuple(y for y in poset.facets if poset.le(z, y))
        ridge_facets[z] = pair

    def drop_atom(y: int, z: int) -> int:
        (atom,) = set(poset.atom_set(y)) - set(poset.atom_set(z))
        return atom

    adjacency: dict[int, list] = {y: [] for y in poset.facets}
    for z, (y1, y2) in ridge_facets.items():
        adjacency[y1].append((y2, z))
        adjacency[y2].append((y1, z))

    signs: dict[int, int] = {}
    components = []
    for root in poset.facets:
        if root in signs:
            continue
        comp = []
        signs[root] = 1
        queue = [root]
        while queue:
            y = queue.pop(0)
            comp.append(y)
            for y2, z in adjacency[y]:
                s1 = _incidence_sign(orders[y], drop_atom(y, z))
                s2 = _incidence_sign(orders[y2], drop_atom(y2, z))
                required = -signs[y] * s1 * s2
                if y2 in signs:
                    if signs[y2] != required:
                        raise NonOrientableError(z, f"(facets {y} and {y2})")
                else:
                    signs[y2] = required
                    queue.append(y2)
        components.append(tuple(sorted(comp)))

    # exhaustive re-verification: every ridge must cancel
    for z, (y1, y2) in ridge_facets.items():
        total = (signs[y1] * _incidence_sign(orders[y1], drop_atom(y1, z))
                 + signs[y2] * _incidence_sign(orders[y2], drop_atom(y2, z)))
        if total != 0:
            raise NonOrientableError(z, "(verification)")

    return OrientationData(orders, signs, tuple(components))
