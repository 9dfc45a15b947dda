"""Facet frames and the localization-style index sum.

For every facet y the restriction sends atoms to a basis of the degree-one
parameter space; the frame records that basis, the positive determinant m(y)
tying it to the reference basis, and the sign the facet carries in the
fundamental cycle.  The index of a ring element is the sum over facets of
sign * restriction / (m * product of basis forms).  The sum of fractions is
always a polynomial on inputs satisfying the two-facets-per-ridge and
orientability assumptions; the fraction arithmetic verifies this at runtime
instead of assuming it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .complexes import OrientationData, is_gorenstein_star, orient
from .face_ring import (FaceRing, FaceRingElement, LSOP, choose_lsop,
                        facet_submatrix, restrict, theta_images)
from .linalg import det
from .polynomials import (LinearDenomFraction, LinearForm, NotPolynomialError,
                          Polynomial, frac_sum, proportionality, zero_fraction)
from .poset import SimplicialPoset, h_vector, f_vector


class FrameError(Exception):
    pass


class NotPlusMinusOneError(ArithmeticError):
    """A ridge comparison scalar came out different from +-1, which signals a
    broken frame or parameter system."""


@dataclass(eq=False)
class FacetFrame:
    """Per-facet restriction data.

    atom_order induces the reference orientation (the increasing order,
    transposed once when the determinant is negative); m is the positive
    determinant of the facet submatrix; sign is the fundamental-cycle sign
    carried over to this ordering.
    """

    facet: int
    atom_order: tuple[int, ...]
    thetas: dict[int, LinearForm]
    m: Fraction
    sign: int
    denom: tuple = field(repr=False, default=())
    denom_scale: Fraction = field(repr=False, default=Fraction(1))

    def to_json_dict(self, names=None) -> dict:
        return {
            "facet": self.facet,
            "atom_order": list(self.atom_order),
            "theta": {str(a): f.render(names) for a, f in sorted(self.thetas.items())},
            "m": str(self.m),
            "sign": self.sign,
        }


def build_frames(poset: SimplicialPoset, lsop: LSOP,
                 orientation: OrientationData) -> list[FacetFrame]:
    """One frame per facet, in facet-id order.

    When the facet submatrix has negative determinant the increasing atom
    order disagrees with the reference orientation; the order is fixed by one
    transposition and the facet sign flips with it, so the signed chain of
    oriented facets is unchanged.  (At rank 1 there is nothing to transpose
    and only the sign flip happens; the index formula needs exactly that.)
    """
    frames = []
    for y in poset.facets:
        d_y = det(facet_submatrix(poset, lsop, y))
        if d_y == 0:
            raise FrameError(f"facet {y}: singular parameter submatrix")
        order = orientation.orders[y]
        sign = orientation.signs[y]
        if d_y < 0:
            if len(order) >= 2:
                order = (order[1], order[0]) + order[2:]
            sign = -sign
        thetas = theta_images(poset, lsop, y)
        denom: dict[LinearForm, int] = {}
        scale = Fraction(1)
        for a in poset.atom_set(y):
            s, prim = thetas[a].primitive()
            scale *= s
            denom[prim] = denom.get(prim, 0) + 1
        frames.append(FacetFrame(y, order, dict(thetas), abs(d_y), sign,
                                 tuple(sorted(denom.items(), key=lambda kv: kv[0].coeffs)),
                                 scale))
    return frames


def ridge_scalar(poset: SimplicialPoset, frames: list[FacetFrame], z: int) -> Fraction:
    """The +-1 scalar lambda(y, y') solving
    m(y) theta_l(y) = lambda * m(y') theta_l'(y') across the ridge z, where l
    and l' are the atoms the two facets add to z."""
    by_facet = {f.facet: f for f in frames}
    pair = [y for y in poset.facets if poset.le(z, y)]
    if len(pair) != 2:
        raise FrameError(f"ridge {z} lies under {len(pair)} facets, need 2")
    y1, y2 = pair
    (l1,) = set(poset.atom_set(y1)) - set(poset.atom_set(z))
    (l2,) = set(poset.atom_set(y2)) - set(poset.atom_set(z))
    f1 = by_facet[y1].thetas[l1].scale(by_facet[y1].m)
    f2 = by_facet[y2].thetas[l2].scale(by_facet[y2].m)
    lam = proportionality(f2, f1)
    if lam is None or abs(lam) != 1:
        raise NotPlusMinusOneError(
            f"ridge {z}: scalar {lam} relating facets {y1}, {y2}")
    return Fraction(lam)


@dataclass
class IndexReport:
    element_repr: str
    value: Polynomial
    is_polynomial: bool
    term_ledger: list[dict] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "element": self.element_repr,
            "value": self.value.render(),
            "polynomial": self.is_polynomial,
            "terms": self.term_ledger,
        }


@lru_cache(maxsize=None)
def _sum_context(poset: SimplicialPoset, lsop: LSOP, frames_key: tuple):
    """Shared data for the facet sum: the common denominator over all facets
    and, per facet, the expanded complement product scaled to an integer
    weight.  Everything here is alpha-independent."""
    frames = list(frames_key)
    d = poset.rank
    common: dict[LinearForm, int] = {}
    for fr in frames:
        for form, mult in fr.denom:
            common[form] = max(common.get(form, 0), mult)
    scalars = []
    for fr in frames:
        scalars.append(Fraction(fr.sign) / (fr.m * fr.denom_scale))
    denom_lcm = 1
    for s in scalars:
        denom_lcm = denom_lcm * s.denominator // _gcd(denom_lcm, s.denominator)
    weights = []
    for fr, s in zip(frames, scalars):
        w = int(s * denom_lcm)
        have = dict(fr.denom)
        comp = Polynomial.constant(d, 1)
        for form, mult in common.items():
            extra = mult - have.get(form, 0)
            for _ in range(extra):
                comp = comp * form.to_polynomial()
        weights.append(comp.scale(w))
    return tuple(sorted(common.items(), key=lambda kv: kv[0].coeffs)), \
        Fraction(1, denom_lcm), tuple(weights)


def _gcd(a, b):
    from math import gcd
    return gcd(a, b)


def index_polynomial(poset: SimplicialPoset, lsop: LSOP, frames: list[FacetFrame],
                     alpha: FaceRingElement, want_ledger: bool = False) -> IndexReport:
    """The facet sum sign * restriction / (m * prod thetas), as an exact
    polynomial in parameter coordinates.

    Inhomogeneous inputs are handled degree by degree.  A residual
    denominator raises NotPolynomialError; on the validated inputs this never
    fires and serves as a runtime witness of the cancellation argument.
    """
    ring = alpha.ring
    if ring.poset is not poset:
        raise ValueError("element belongs to a different poset")
    d = poset.rank
    parts = alpha.homogeneous_components()
    total = Polynomial.zero(d)
    ledger = []
    common, lcm_scale, weights = _sum_context(poset, lsop, tuple(frames))
    for deg, part in parts.items():
        num = Polynomial.zero(d)
        for fr, weight in zip(frames, weights):
            restricted = restrict(poset, lsop, fr.facet, part)
            if want_ledger:
                ledger.append({
                    "facet": fr.facet,
                    "sign": fr.sign,
                    "m": str(fr.m),
                    "numerator": restricted.render(),
                    "denominator": " * ".join(
                        f"({f.render()})^{m}" if m > 1 else f"({f.render()})"
                        for f, m in fr.denom) or "1",
                })
            if not restricted.is_zero():
                num = num + restricted * weight
        value = LinearDenomFraction(num, lcm_scale, common)
        if not value.is_polynomial():
            raise NotPolynomialError(
                value.denom,
                f"index of degree-{deg} part is not polynomial; "
                f"residual denominator {[f.render() for f, _ in value.denom]}")
        poly = value.to_polynomial()
        if not poly.is_zero() and poly.degree() != deg - d:
            raise FrameError(
                f"index degree {poly.degree()} != {deg} - {d}")
        total = total + poly
    return IndexReport(alpha.render(), total, True, ledger)


def index_fraction_sum(poset: SimplicialPoset, lsop: LSOP, frames: list[FacetFrame],
                       alpha: FaceRingElement) -> LinearDenomFraction:
    """The same facet sum computed term by term with the generic fraction
    addition; slower, used as an oracle for the shared-denominator path."""
    d = poset.rank
    terms = []
    for fr in frames:
        restricted = restrict(poset, lsop, fr.facet, alpha)
        terms.append(LinearDenomFraction(
            restricted, Fraction(fr.sign) / (fr.m * fr.denom_scale), fr.denom))
    if not terms:
        return zero_fraction(d)
    return frac_sum(terms)


def index_rational(poset: SimplicialPoset, lsop: LSOP, frames: list[FacetFrame],
                   alpha: FaceRingElement) -> Fraction:
    """The induced scalar index of a homogeneous top-degree element: the
    constant value of the index polynomial."""
    d = poset.rank
    if not alpha.is_homogeneous() or (not alpha.is_zero() and alpha.degree() != d):
        raise ValueError(f"index needs a homogeneous element of degree {d}")
    report = index_polynomial(poset, lsop, frames, alpha)
    if report.value.degree() > 0:
        raise FrameError("top-degree index produced a nonconstant polynomial")
    return Fraction(report.value.constant_term())


class ClassSumMismatchError(AssertionError):
    """The combinatorial class sum disagreed with the fraction-sum index."""


def facet_class_sums(poset: SimplicialPoset, frames: list[FacetFrame],
                     lsop: LSOP | None = None,
                     ring: FaceRing | None = None) -> dict[tuple[int, ...], int]:
    """Sum of facet signs in each atom-set class.

    When an lsop is supplied, each sum is cross-checked against the index of
    m_I * (product of the class's atom variables); disagreement raises, since
    that equality is the load-bearing identity of the whole construction.
    """
    sums: dict[tuple[int, ...], int] = {}
    ms: dict[tuple[int, ...], Fraction] = {}
    for fr in frames:
        key = poset.atom_set(fr.facet)
        sums[key] = sums.get(key, 0) + fr.sign
        if key in ms and ms[key] != fr.m:
            raise FrameError(f"class {key}: determinants {ms[key]} and {fr.m} differ")
        ms[key] = fr.m
    if lsop is not None:
        if ring is None:
            ring = FaceRing(poset)
        for key, expected in sums.items():
            alpha = ring.one().scale(ms[key])
            for a in key:
                alpha = alpha * ring.atom_var(a)
            got = index_rational(poset, lsop, frames, alpha)
            if got != expected:
                raise ClassSumMismatchError(
                    f"class {key}: fraction sum {got} != sign sum {expected}")
    return dict(sorted(sums.items()))


def parity_witness_element(poset: SimplicialPoset, frames: list[FacetFrame],
                           ring: FaceRing | None = None) -> FaceRingElement:
    """Sum over realized atom-set classes of m_I times the product of the
    class's atom variables.  Its scalar index equals the total sign sum, so
    its parity equals the facet-count parity."""
    if ring is None:
        ring = FaceRing(poset)
    ms: dict[tuple[int, ...], Fraction] = {}
    for fr in frames:
        ms.setdefault(poset.atom_set(fr.facet), fr.m)
    total = ring.zero()
    for key, m in sorted(ms.items()):
        term = ring.one().scale(m)
        for a in key:
            term = term * ring.atom_var(a)
        total = total + term
    return total


class NotGorensteinError(Exception):
    def __init__(self, report):
        super().__init__(f"{report.name}: not Gorenstein*")
        self.report = report


class ParityContradictionError(AssertionError):
    """A certified input with an interior h-zero produced a nonzero class sum
    or an odd facet count.  This would contradict the parity theorem, so it
    can only mean an internal bug."""


@dataclass
class ParityReport:
    name: str
    h: tuple[int, ...]
    facets: int
    classes: list[dict]
    even: bool
    hypothesis_met: bool
    polynomiality_checked: bool

    def to_json_dict(self) -> dict:
        return {
            "h": list(self.h),
            "facets": self.facets,
            "classes": self.classes,
            "even": self.even,
            "hypothesis_met": self.hypothesis_met,
            "polynomiality_checked": self.polynomiality_checked,
        }


def verify_parity(poset: SimplicialPoset, seed: int = 0) -> ParityReport:
    """Full pipeline: certify the sphere property, orient, choose parameters,
    build frames, and check the parity consequence.

    With some interior h-entry zero, every class sum must vanish and the
    facet count must be even; any counterexample raises
    ParityContradictionError rather than being reported as data.
    """
    report = is_gorenstein_star(poset)
    if not report.passed:
        raise NotGorensteinError(report)
    h = h_vector(poset)
    d = poset.rank
    f = f_vector(poset)
    orientation = orient(poset)
    lsop = choose_lsop(poset, seed=seed)
    frames = build_frames(poset, lsop, orientation)
    ring = FaceRing(poset)
    sums = facet_class_sums(poset, frames, lsop=lsop, ring=ring)
    sizes: dict[tuple[int, ...], int] = {}
    for fr in frames:
        key = poset.atom_set(fr.facet)
        sizes[key] = sizes.get(key, 0) + 1
    classes = [{"atoms": list(k), "sum": s, "size": sizes[k]}
               for k, s in sums.items()]
    facets = f[d - 1] if d >= 1 else 1
    even = facets % 2 == 0
    hypothesis_met = any(h[i] == 0 for i in range(1, d))
    if hypothesis_met:
        bad = [c for c in classes if c["sum"] != 0]
        if bad or not even:
            raise ParityContradictionError(
                f"{poset.name}: interior h-zero but class sums {bad} / facets {facets}")
    return ParityReport(poset.name, h, facets, classes, even, hypothesis_met, True)
