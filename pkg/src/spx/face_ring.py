"""The face ring of a simplicial poset, with an explicit normal form.

The ring is the quotient of the polynomial ring on all nonbottom elements by
the relations  u*v = (u ^ v) * (sum of minimal upper bounds of u, v), where
the bottom element acts as 1 and an empty sum is 0.  Monomials supported on
chains form a basis; multiplication straightens any incomparable pair until
only chain monomials remain.  Degree-one systems of parameters are sampled
with small integer coefficients, validated by facet-submatrix nonsingularity,
and drive the restriction maps onto polynomial rings in the parameter
coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import det, invert, matrix_rank
from .polynomials import LinearForm, Polynomial, _norm_coeff
from .poset import SimplicialPoset, ensure_validated, NonPureError


@dataclass(frozen=True)
class ChainMonomial:
    """Monomial on a chain of elements: ((id, exponent), ...) with ids
    strictly increasing along the poset order.  The empty tuple is 1."""

    items: tuple[tuple[int, int], ...]

    def degree(self, poset: SimplicialPoset) -> int:
        return sum(e * poset.ranks[w] for w, e in self.items)

    def render(self) -> str:
        if not self.items:
            return "1"
        return "<".join(f"{w}^{e}" if e > 1 else str(w) for w, e in self.items)

    def __repr__(self) -> str:
        return f"ChainMonomial({self.render()})"


UNIT = ChainMonomial(())


class FaceRingElement:
    """Finite rational combination of chain monomials, always in normal form."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: "FaceRing", terms: dict[ChainMonomial, object]):
        self.ring = ring
        self.terms = {m: _norm_coeff(Fraction(c)) if not isinstance(c, int) else c
                      for m, c in terms.items() if c != 0}

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (isinstance(other, FaceRingElement)
                and self.ring is other.ring and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "FaceRingElement") -> "FaceRingElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return FaceRingElement(self.ring, out)

    def __sub__(self, other: "FaceRingElement") -> "FaceRingElement":
        return self + other.scale(-1)

    def scale(self, c) -> "FaceRingElement":
        if c == 0:
            return self.ring.zero()
        return FaceRingElement(self.ring, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other: "FaceRingElement") -> "FaceRingElement":
        ring = self.ring
        out: dict[ChainMonomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c = c1 * c2
                for m, k in ring._product_normal_form(m1, m2).items():
                    s = out.get(m, 0) + c * k
                    if s == 0:
                        out.pop(m, None)
                    else:
                        out[m] = s
        return FaceRingElement(ring, out)

    def __pow__(self, k: int) -> "FaceRingElement":
        result = self.ring.one()
        for _ in range(k):
            result = result * self
        return result

    def homogeneous_components(self) -> dict[int, "FaceRingElement"]:
        poset = self.ring.poset
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(m.degree(poset), {})[m] = c
        return {d: FaceRingElement(self.ring, t) for d, t in sorted(parts.items())}

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(m.degree(self.ring.poset) for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({m.degree(self.ring.poset) for m in self.terms}) <= 1

    def render(self) -> str:
        if not self.terms:
            return "0"
        poset = self.ring.poset
        pieces = []
        for m, c in sorted(self.terms.items(),
                           key=lambda mc: (mc[0].degree(poset), mc[0].items)):
            c = Fraction(c)
            body = m.render() if abs(c) == 1 and m.items else (
                f"{abs(c)}*{m.render()}" if m.items else str(abs(c)))
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"FaceRingElement({self.render()})"


class FaceRing:
    """Wrapper holding a validated poset plus normalization caches."""

    def __init__(self, poset: SimplicialPoset):
        ensure_validated(poset)
        self.poset = poset
        self._nf_cache: dict[tuple, dict[ChainMonomial, int]] = {}

    def zero(self) -> FaceRingElement:
        return FaceRingElement(self, {})

    def one(self) -> FaceRingElement:
        return FaceRingElement(self, {UNIT: 1})

    def var(self, element: int) -> FaceRingElement:
        """The generator for a poset element (any nonbottom element)."""
        if not 1 <= element < self.poset.n_elements:
            raise ValueError(f"no generator for element {element}")
        return FaceRingElement(self, {ChainMonomial(((element, 1),)): 1})

    def atom_var(self, atom: int) -> FaceRingElement:
        if self.poset.ranks[atom] != 1:
            raise ValueError(f"element {atom} is not an atom")
        return self.var(atom)

    def element(self, terms: dict[ChainMonomial, object]) -> FaceRingElement:
        return FaceRingElement(self, terms)

    # -- normal form -----------------------------------------------------

    def _product_normal_form(self, m1: ChainMonomial, m2: ChainMonomial):
        exps: dict[int, int] = dict(m1.items)
        for w, e in m2.items:
            exps[w] = exps.get(w, 0) + e
        return self._normalize(tuple(sorted(exps.items())))

    def _normalize(self, key: tuple) -> dict[ChainMonomial, int]:
        """Straighten a monomial (tuple of (element, exp), sorted by id) into
        chain monomials.

        The leftmost incomparable pair (u, v) in (rank, id) order is replaced
        using u*v = (u ^ v) * sum(minimal upper bounds); each replacement
        strictly increases comparability among supports, so this terminates.
        Confluence (independence of the pair chosen) is asserted by property
        tests rather than proved here.
        """
        cached = self._nf_cache.get(key)
        if cached is not None:
            return cached
        poset = self.poset
        support = sorted((w for w, _ in key), key=lambda w: (poset.ranks[w], w))
        pair = None
        for i in range(len(support)):
            for j in range(i + 1, len(support)):
                u, v = support[i], support[j]
                if not poset.le(u, v) and not poset.le(v, u):
                    pair = (u, v)
                    break
            if pair:
                break
        if pair is None:
            chain = tuple(sorted(key, key=lambda we: poset.ranks[we[0]]))
            result = {ChainMonomial(chain): 1}
            self._nf_cache[key] = result
            return result
        u, v = pair
        exps = dict(key)
        for w in (u, v):
            exps[w] -= 1
            if exps[w] == 0:
                del exps[w]
        mubs = poset.minimal_upper_bounds(u, v)
        result: dict[ChainMonomial, int] = {}
        if mubs:
            meet = poset.meet(u, v)
            if meet is None:
                raise AssertionError(
                    f"meet({u},{v}) missing despite common upper bounds")
            base = dict(exps)
            if meet != 0:
                base[meet] = base.get(meet, 0) + 1
            for z in mubs:
                branch = dict(base)
                branch[z] = branch.get(z, 0) + 1
                for m, c in self._normalize(tuple(sorted(branch.items()))).items():
                    result[m] = result.get(m, 0) + c
                    if result[m] == 0:
                        del result[m]
        self._nf_cache[key] = result
        return result

    # -- graded pieces -----------------------------------------------------

    def chain_monomials(self, degree: int) -> tuple[ChainMonomial, ...]:
        """All chain monomials of the given degree (they are a basis)."""
        cache = self.poset._cache.setdefault("chain_monomials", {})
        if degree in cache:
            return cache[degree]
        poset = self.poset
        out: list[ChainMonomial] = []
        if degree == 0:
            out.append(UNIT)
        else:
            elems = sorted(poset.elements())[1:]

            def grow(chain: list, remaining: int, last: int | None):
                if remaining == 0 and chain:
                    out.append(ChainMonomial(tuple(chain)))
                for w in elems:
                    r = poset.ranks[w]
                    if r > remaining:
                        continue
                    if last is not None and not (poset.le(last, w) and w != last):
                        continue
                    max_e = remaining // r
                    for e in range(1, max_e + 1):
                        chain.append((w, e))
                        grow(chain, remaining - e * r, w)
                        chain.pop()

            grow([], degree, None)
        result = tuple(sorted(out, key=lambda m: m.items))
        cache[degree] = result
        return result

    def graded_dimension(self, degree: int) -> int:
        return len(self.chain_monomials(degree))


def graded_dimension(poset: SimplicialPoset, degree: int) -> int:
    """Dimension of the degree-i part of the face ring (chain monomials of
    that degree form a basis)."""
    return FaceRing(poset).graded_dimension(degree)


# -- linear systems of parameters ---------------------------------------------


class LsopError(Exception):
    pass


class LSOP:
    """d degree-one forms in the atom variables, as a d x n coefficient
    matrix.  Valid when every facet's column submatrix is nonsingular."""

    def __init__(self, rows, seed: int | None = None):
        self.rows = tuple(tuple(_norm_coeff(Fraction(c)) for c in row) for row in rows)
        self.seed = seed

    @property
    def d(self) -> int:
        return len(self.rows)

    def render(self, poset: SimplicialPoset) -> list[str]:
        names = [f"x{a}" for a in poset.atoms]
        out = []
        for j, row in enumerate(self.rows):
            form = LinearForm(row)
            out.append(f"t{j + 1} = {form.render(names)}")
        return out

    def __repr__(self) -> str:
        return f"LSOP(d={self.d}, seed={self.seed})"


def facet_submatrix(poset: SimplicialPoset, lsop: LSOP, facet: int):
    """Columns of the coefficient matrix at the atoms of the facet, in
    increasing atom order."""
    cols = [poset._atom_pos[a] for a in poset.atom_set(facet)]
    return [[row[c] for c in cols] for row in lsop.rows]


def facet_determinants(poset: SimplicialPoset, lsop: LSOP) -> dict[int, Fraction]:
    return {y: det(facet_submatrix(poset, lsop, y)) for y in poset.facets}


def lsop_is_valid(poset: SimplicialPoset, lsop: LSOP) -> bool:
    if lsop.d != poset.rank or any(len(r) != len(poset.atoms) for r in lsop.rows):
        return False
    return all(v != 0 for v in facet_determinants(poset, lsop).values())


def choose_lsop(poset: SimplicialPoset, seed: int = 0, coeff_bound: int = 9,
                max_tries: int = 1000) -> LSOP:
    """Sample integer coefficient rows until every facet submatrix is
    nonsingular.  Deterministic for a given seed."""
    ensure_validated(poset)
    if not poset.is_pure:
        raise NonPureError(f"{poset.name}: lsop needs a pure poset")
    d, n = poset.rank, len(poset.atoms)
    rng = random.Random(seed)
    for _ in range(max_tries):
        rows = [[rng.randint(-coeff_bound, coeff_bound) for _ in range(n)]
                for _ in range(d)]
        cand = LSOP(rows, seed)
        if lsop_is_valid(poset, cand):
            return cand
    raise LsopError(f"RETRY_EXHAUSTED after {max_tries} samples (seed {seed})")


# -- restriction maps ----------------------------------------------------------


@lru_cache(maxsize=None)
def theta_images(poset: SimplicialPoset, lsop: LSOP, facet: int) -> dict[int, LinearForm]:
    """Image of each atom variable of the facet in parameter coordinates:
    atom i maps to row i of the inverse facet submatrix."""
    inv = invert(facet_submatrix(poset, lsop, facet))
    return {a: LinearForm(inv[k]) for k, a in enumerate(poset.atom_set(facet))}


@lru_cache(maxsize=None)
def _element_image(poset: SimplicialPoset, lsop: LSOP, facet: int, w: int) -> Polynomial:
    """Image of a poset-element generator under the facet restriction: the
    product of the images of its atoms (zero if w is not below the facet)."""
    d = poset.rank
    if not poset.le(w, facet):
        return Polynomial.zero(d)
    result = Polynomial.constant(d, 1)
    thetas = theta_images(poset, lsop, facet)
    for a in poset.atom_set(w):
        result = result * thetas[a].to_polynomial()
    return result


@lru_cache(maxsize=None)
def _element_image_power(poset: SimplicialPoset, lsop: LSOP, facet: int,
                         w: int, exp: int) -> Polynomial:
    if exp == 1:
        return _element_image(poset, lsop, facet, w)
    return (_element_image_power(poset, lsop, facet, w, exp - 1)
            * _element_image(poset, lsop, facet, w))


def restrict(poset: SimplicialPoset, lsop: LSOP, facet: int,
             alpha: FaceRingElement) -> Polynomial:
    """Restriction of a face-ring element onto the polynomial ring of one
    facet, written in parameter coordinates.

    Monomials touching any element not below the facet die; the rest map
    multiplicatively.  Restricted to polynomials in the parameters this is
    the identity, which the tests exercise directly.
    """
    if poset.ranks[facet] != poset.rank:
        raise ValueError(f"element {facet} is not a facet")
    total = Polynomial.zero(poset.rank)
    for mono, coeff in alpha.terms.items():
        if any(not poset.le(w, facet) for w, _ in mono.items):
            continue
        part = Polynomial.constant(poset.rank, 1)
        for w, e in mono.items:
            part = part * _element_image_power(poset, lsop, facet, w, e)
        total = total + part.scale(coeff)
    return total


def quotient_graded_dimension(poset: SimplicialPoset, lsop: LSOP, degree: int) -> int:
    """Dimension of the degree-i part of the face ring modulo the parameter
    ideal: count chain monomials of degree i, subtract the rank of
    multiplication-by-parameters out of degree i-1."""
    ring = FaceRing(poset)
    basis = ring.chain_monomials(degree)
    dim = len(basis)
    if degree == 0:
        return dim
    index = {m: i for i, m in enumerate(basis)}
    lower = ring.chain_monomials(degree - 1)
    rows = []
    for mono in lower:
        beta = ring.element({mono: 1})
        atom_products = {a: ring.atom_var(a) * beta for a in poset.atoms}
        for row_coeffs in lsop.rows:
            combo: dict[int, object] = {}
            for a, c in zip(poset.atoms, row_coeffs):
                if c == 0:
                    continue
                for m, v in atom_products[a].terms.items():
                    idx = index[m]
                    s = combo.get(idx, 0) + c * v
                    if s == 0:
                        combo.pop(idx, None)
                    else:
                        combo[idx] = s
            if combo:
                rows.append(combo)
    return dim - matrix_rank(rows)
