"""Finite simplicial posets: validation, f/h-vectors, meets and joins of
elements.

A poset is given by its Hasse diagram: dense integer ids, declared ranks,
and lists of lower covers; id 0 is the unique bottom element.  The defining
axiom (every lower interval is a boolean algebra) is checked, not assumed,
via the atom-set power-set bijection.  Order relations are kept as bitmasks
over element ids, which makes every query here a few integer operations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb


class PosetError(Exception):
    pass


class PosetParseError(PosetError):
    """Structurally malformed input: dangling ids, cycles, bad id layout."""


class PosetInvalidError(PosetError):
    """A validated poset was required but validation failed."""

    def __init__(self, report):
        super().__init__("; ".join(v.detail for v in report.violations) or "invalid poset")
        self.report = report


class NonPureError(PosetError):
    """An operation needed all maximal elements at top rank."""


@dataclass(frozen=True)
class Violation:
    code: str
    element: int | None
    detail: str


@dataclass
class ValidationReport:
    name: str
    passed: bool
    rank: int
    violations: list[Violation] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "rank": self.rank,
            "violations": [
                {"code": v.code, "element": v.element, "detail": v.detail}
                for v in self.violations
            ],
        }


class SimplicialPoset:
    """Immutable after construction; all operations are pure queries.

    Construction performs parse-level checks only (ids dense from 0, covers
    resolve, no cycles); the simplicial axioms live in validate().
    """

    def __init__(self, name: str, ranks, lower_covers):
        self.name = name
        self.ranks = tuple(int(r) for r in ranks)
        self.lower_covers = tuple(tuple(sorted(set(c))) for c in lower_covers)
        n = len(self.ranks)
        if n == 0:
            raise PosetParseError("no elements; id 0 must exist")
        if len(self.lower_covers) != n:
            raise PosetParseError("ranks and covers disagree in length")
        for e, covers in enumerate(self.lower_covers):
            for c in covers:
                if not (0 <= c < n):
                    raise PosetParseError(f"element {e} covers unknown id {c}")
                if c == e:
                    raise PosetParseError(f"element {e} covers itself")
        if any(r < 0 for r in self.ranks):
            raise PosetParseError("negative rank")

        # downward closure by DFS; a cycle shows up as an in-progress revisit
        below = [0] * n  # bitmask of ids <= e, including e
        state = [0] * n  # 0 unseen, 1 in progress, 2 done
        for start in range(n):
            if state[start] == 2:
                continue
            stack = [(start, iter(self.lower_covers[start]))]
            state[start] = 1
            while stack:
                e, it = stack[-1]
                advanced = False
                for c in it:
                    if state[c] == 1:
                        raise PosetParseError(f"cover cycle through element {c}")
                    if state[c] == 0:
                        state[c] = 1
                        stack.append((c, iter(self.lower_covers[c])))
                        advanced = True
                        break
                if not advanced:
                    mask = 1 << e
                    for c in self.lower_covers[e]:
                        mask |= below[c]
                    below[e] = mask
                    state[e] = 2
                    stack.pop()
        self._below = tuple(below)
        above = [0] * n
        for e in range(n):
            m = below[e]
            while m:
                low = m & -m
                above[low.bit_length() - 1] |= 1 << e
                m ^= low
        self._above = tuple(above)

        self.rank = max(self.ranks)
        self.atoms = tuple(e for e in range(n) if self.ranks[e] == 1)
        self._atom_pos = {a: i for i, a in enumerate(self.atoms)}
        atom_masks = []
        for e in range(n):
            m = 0
            for a in self.atoms:
                if below[e] >> a & 1:
                    m |= 1 << self._atom_pos[a]
            atom_masks.append(m)
        self._atom_mask = tuple(atom_masks)
        by_rank: dict[int, list[int]] = {}
        for e in range(n):
            by_rank.setdefault(self.ranks[e], []).append(e)
        self.elements_by_rank = {r: tuple(v) for r, v in sorted(by_rank.items())}
        self.facets = self.elements_by_rank.get(self.rank, ())
        maximal = [e for e in range(n) if above[e] == 1 << e]
        self.is_pure = all(self.ranks[e] == self.rank for e in maximal)
        self._cache: dict = {}

    # -- basic queries -------------------------------------------------

    @property
    def n_elements(self) -> int:
        return len(self.ranks)

    def elements(self):
        return range(len(self.ranks))

    def rank_of(self, e: int) -> int:
        return self.ranks[e]

    def le(self, a: int, b: int) -> bool:
        return bool(self._below[b] >> a & 1)

    def below_set(self, e: int) -> tuple[int, ...]:
        return _mask_ids(self._below[e])

    def strictly_above(self, e: int) -> tuple[int, ...]:
        return _mask_ids(self._above[e] & ~(1 << e))

    def atom_set(self, e: int) -> tuple[int, ...]:
        """Ids of the atoms below e (the vertex set of the face e)."""
        m = self._atom_mask[e]
        return tuple(self.atoms[i] for i in _mask_positions(m))

    def atom_mask(self, e: int) -> int:
        return self._atom_mask[e]

    # -- order algebra ---------------------------------------------------

    def meet(self, a: int, b: int) -> int | None:
        """Greatest lower bound, or None when the common lower bounds have no
        greatest element (never happens when a and b share an upper bound)."""
        commons = self._below[a] & self._below[b]
        for e in _mask_ids(commons):
            if self._below[e] == commons:
                return e
        return None

    def maximal_common_lower_bounds(self, a: int, b: int) -> tuple[int, ...]:
        """Witness antichain for a failed meet."""
        commons = self._below[a] & self._below[b]
        out = []
        for e in _mask_ids(commons):
            if self._above[e] & commons == 1 << e:
                out.append(e)
        return tuple(out)

    def minimal_upper_bounds(self, a: int, b: int) -> tuple[int, ...]:
        uppers = self._above[a] & self._above[b]
        out = []
        for e in _mask_ids(uppers):
            if self._below[e] & uppers == 1 << e:
                out.append(e)
        return tuple(out)

    # -- serialization -----------------------------------------------------

    @classmethod
    def from_json_dict(cls, data: dict) -> "SimplicialPoset":
        try:
            name = data.get("name", "poset")
            elements = data["elements"]
        except (TypeError, KeyError) as exc:
            raise PosetParseError(f"bad poset object: {exc}") from exc
        if not isinstance(elements, list) or not elements:
            raise PosetParseError("'elements' must be a non-empty list")
        seen = {}
        for entry in elements:
            try:
                eid = int(entry["id"])
                rank = int(entry["rank"])
                covers = [int(c) for c in entry["covers"]]
            except (TypeError, KeyError, ValueError) as exc:
                raise PosetParseError(f"bad element entry {entry!r}: {exc}") from exc
            if eid in seen:
                raise PosetParseError(f"duplicate id {eid}")
            seen[eid] = (rank, covers)
        n = len(seen)
        if sorted(seen) != list(range(n)):
            raise PosetParseError("ids must be dense from 0")
        ranks = [seen[e][0] for e in range(n)]
        covers = [seen[e][1] for e in range(n)]
        return cls(str(name), ranks, covers)

    @classmethod
    def from_json(cls, text: str) -> "SimplicialPoset":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PosetParseError(f"invalid JSON: {exc}") from exc
        return cls.from_json_dict(data)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "elements": [
                {"id": e, "rank": self.ranks[e], "covers": list(self.lower_covers[e])}
                for e in self.elements()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    def __repr__(self) -> str:
        return f"SimplicialPoset({self.name!r}, {self.n_elements} elements, rank {self.rank})"


def _mask_ids(mask: int):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _mask_positions(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def validate(poset: SimplicialPoset) -> ValidationReport:
    """Check the defining axioms; every failure becomes a report entry.

    PASS means: a unique bottom of rank 0 below everything, covers step rank
    by exactly one, declared ranks match longest-chain ranks, and every lower
    interval [0,y] is boolean (atom sets of the interval realize the full
    power set of the atom set of y).
    """
    violations: list[Violation] = []
    n = poset.n_elements

    rank0 = [e for e in poset.elements() if poset.ranks[e] == 0]
    if poset.ranks[0] != 0:
        violations.append(Violation("bottom", 0, "element 0 must have rank 0"))
    if len(rank0) != 1:
        violations.append(Violation(
            "bottom", None, f"expected exactly one rank-0 element, found {len(rank0)}"))
    if poset.lower_covers[0] != ():
        violations.append(Violation("bottom", 0, "element 0 must cover nothing"))
    for e in poset.elements():
        if e != 0 and not poset.le(0, e):
            violations.append(Violation("bottom", e, f"element {e} is not above 0"))

    for e in poset.elements():
        for c in poset.lower_covers[e]:
            if poset.ranks[e] != poset.ranks[c] + 1:
                violations.append(Violation(
                    "rank_jump", e,
                    f"element {e} (rank {poset.ranks[e]}) covers {c} (rank {poset.ranks[c]})"))

    # longest chain from the bottom, independent of the declared ranks
    chain_rank = [0] * n
    for e in sorted(poset.elements(), key=lambda x: len(poset.below_set(x))):
        if poset.lower_covers[e]:
            chain_rank[e] = 1 + max(chain_rank[c] for c in poset.lower_covers[e])
    for e in poset.elements():
        if chain_rank[e] != poset.ranks[e]:
            violations.append(Violation(
                "rank_mismatch", e,
                f"declared rank {poset.ranks[e]} but longest chain gives {chain_rank[e]}"))

    for y in poset.elements():
        r = poset.ranks[y]
        interval = poset.below_set(y)
        amask_y = poset.atom_mask(y)
        ok = (len(interval) == 2 ** r
              and bin(amask_y).count("1") == r)
        if ok:
            seen = set()
            for w in interval:
                m = poset.atom_mask(w)
                if m in seen or m & ~amask_y:
                    ok = False
                    break
                seen.add(m)
            ok = ok and len(seen) == 2 ** r
        if not ok:
            violations.append(Violation(
                "boolean_interval", y,
                f"interval [0,{y}] is not a boolean algebra of rank {r}"))

    return ValidationReport(poset.name, not violations, poset.rank, violations)


def ensure_validated(poset: SimplicialPoset) -> None:
    """Validate once per poset and raise PosetInvalidError on failure."""
    report = poset._cache.get("validation")
    if report is None:
        report = validate(poset)
        poset._cache["validation"] = report
    if not report.passed:
        raise PosetInvalidError(report)


def f_vector(poset: SimplicialPoset) -> tuple[int, ...]:
    """(f_0, ..., f_{d-1}) where f_i counts elements of rank i+1."""
    ensure_validated(poset)
    return tuple(len(poset.elements_by_rank.get(i + 1, ()))
                 for i in range(poset.rank))


def h_vector(poset: SimplicialPoset) -> tuple[int, ...]:
    """(h_0, ..., h_d), read off the exact expansion of
    sum_i f_{i-1} (t-1)^(d-i) as a polynomial in t."""
    ensure_validated(poset)
    d = poset.rank
    f = (1,) + f_vector(poset)
    coeff = [0] * (d + 1)  # coeff[k] multiplies t^k
    for i in range(d + 1):
        for k in range(d - i + 1):
            coeff[k] += f[i] * comb(d - i, k) * (-1) ** (d - i - k)
    return tuple(coeff[d - i] for i in range(d + 1))


@dataclass(frozen=True)
class FHVectors:
    f: tuple[int, ...]
    h: tuple[int, ...]
    d: int

    @classmethod
    def from_poset(cls, poset: SimplicialPoset) -> "FHVectors":
        f = f_vector(poset)
        h = h_vector(poset)
        d = poset.rank
        if h[0] != 1:
            raise AssertionError("h_0 must be 1")
        if d >= 1 and sum(h) != f[d - 1]:
            raise AssertionError("facet count must equal the h-vector sum")
        if d >= 1 and poset.facets and any(fi < 1 for fi in f):
            raise AssertionError("a rank is uninhabited in a poset with facets")
        return cls(f, h, d)
