"""Sparse multivariate polynomials over Q and fractions with linear-form
denominators.

Everything lives in a fixed number of variables (the coordinates of a chosen
degree-one basis, rendered t1..td).  Coefficients are ints whenever they can
be, Fractions otherwise; both compare and hash consistently so the mix is
harmless and keeps the hot loops on machine integers.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd


def _norm_coeff(c):
    """Collapse integral Fractions to int; keep exactness, gain speed."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class LinearForm:
    """An element of the degree-one part: c1*t1 + ... + cd*td.

    Immutable and hashable; the zero form is representable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(_norm_coeff(Fraction(c)) for c in coeffs)

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self) -> "LinearForm":
        return LinearForm(-a for a in self.coeffs)

    def scale(self, c) -> "LinearForm":
        return LinearForm(c * a for a in self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def canonical(self) -> tuple[Fraction, "LinearForm"]:
        """Return (scale, form) with the first nonzero coefficient equal to 1,
        so that self == form.scale(scale).  Zero form raises."""
        for c in self.coeffs:
            if c != 0:
                s = Fraction(c)
                return s, self.scale(1 / s)
        raise ValueError("zero form has no canonical scaling")

    def primitive(self) -> tuple[Fraction, "LinearForm"]:
        """Return (scale, form) with coprime integer coefficients and positive
        leading coefficient.  Preferred denominator representative: integer
        arithmetic downstream stays fast."""
        lead = None
        denom_lcm = 1
        num_gcd = 0
        for c in self.coeffs:
            if c == 0:
                continue
            f = Fraction(c)
            if lead is None:
                lead = f
            denom_lcm = denom_lcm * f.denominator // gcd(denom_lcm, f.denominator)
            num_gcd = gcd(num_gcd, f.numerator)
        if lead is None:
            raise ValueError("zero form has no primitive scaling")
        s = Fraction(num_gcd, denom_lcm)
        if lead < 0:
            s = -s
        return s, self.scale(1 / s)

    def to_polynomial(self) -> "Polynomial":
        n = self.nvars
        terms = {}
        for i, c in enumerate(self.coeffs):
            if c != 0:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return Polynomial(n, terms)

    def render(self, names=None) -> str:
        return self.to_polynomial().render(names)

    def __repr__(self) -> str:
        return f"LinearForm({self.render()})"


def proportionality(f: LinearForm, g: LinearForm):
    """The scalar c with g == c*f, or None when g is not a multiple of f."""
    if f.is_zero():
        raise ValueError("proportionality base form must be nonzero")
    c = None
    for a, b in zip(f.coeffs, g.coeffs):
        if a == 0:
            if b != 0:
                return None
            continue
        ratio = Fraction(b) / Fraction(a)
        if c is None:
            c = ratio
        elif c != ratio:
            return None
    return _norm_coeff(c if c is not None else Fraction(0))


def _grlex_key(item):
    exps, _ = item
    return (sum(exps), exps)


class Polynomial:
    """Sparse polynomial: {exponent tuple: coefficient}, no zero coefficients.

    Monomials are ordered graded-lexicographically wherever an order matters
    (rendering, content extraction), which keeps all output reproducible.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = _norm_coeff(c)
                if c != 0:
                    self.terms[tuple(e)] = c

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_components(self) -> dict[int, "Polynomial"]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: Polynomial(self.nvars, t) for d, t in sorted(parts.items())}

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = _norm_coeff(s)
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = out
        return p

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def scale(self, c) -> "Polynomial":
        c = _norm_coeff(Fraction(c)) if not isinstance(c, int) else c
        if c == 0:
            return Polynomial.zero(self.nvars)
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = {e: _norm_coeff(c * v) for e, v in self.terms.items()}
        return p

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not self.terms or not other.terms:
            return Polynomial.zero(self.nvars)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e, 0) + ca * cb
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = {e: _norm_coeff(c) for e, c in out.items()}
        return p

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1)
        for _ in range(k):
            result = result * self
        return result

    def content_primitive(self) -> tuple[Fraction, "Polynomial"]:
        """Split into content * primitive part: coprime integer coefficients,
        leading (grlex-largest) coefficient positive.  Zero -> (0, 0)."""
        if not self.terms:
            return Fraction(0), self
        denom_lcm = 1
        num_gcd = 0
        for c in self.terms.values():
            f = Fraction(c)
            denom_lcm = denom_lcm * f.denominator // gcd(denom_lcm, f.denominator)
            num_gcd = gcd(num_gcd, f.numerator)
        content = Fraction(num_gcd, denom_lcm)
        lead = max(self.terms.items(), key=_grlex_key)[1]
        if lead < 0:
            content = -content
        return content, self.scale(1 / content)

    def render(self, names=None) -> str:
        """Canonical text: monomials sorted grlex-descending, explicit
        rationals, e.g. '3/2*t1^2*t2 - t3 + 5'."""
        if not self.terms:
            return "0"
        if names is None:
            names = [f"t{i + 1}" for i in range(self.nvars)]
        pieces = []
        for e, c in sorted(self.terms.items(), key=_grlex_key, reverse=True):
            mono = "*".join(
                f"{names[i]}^{k}" if k > 1 else names[i]
                for i, k in enumerate(e) if k > 0
            )
            coeff = Fraction(c)
            if not mono:
                body = str(coeff if coeff > 0 else -coeff)
            elif abs(coeff) == 1:
                body = mono
            else:
                body = f"{abs(coeff)}*{mono}"
            if not pieces:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({self.render()})"


def divide_exact(p: Polynomial, f: LinearForm):
    """Quotient q with q*f == p, or None when f does not divide p.

    Works by synthetic division along the first variable appearing in f:
    write f = c*t_piv + g; peel p from the top t_piv-degree down.  The
    remainder is exactly the result of substituting the parametrization
    t_piv = -g/c of the hyperplane f = 0, so divisibility and the vanishing
    test coincide.
    """
    if f.is_zero():
        raise ValueError("division by the zero form")
    if p.is_zero():
        return Polynomial.zero(p.nvars)
    piv = next(i for i, c in enumerate(f.coeffs) if c != 0)
    c = Fraction(f.coeffs[piv])
    g = [(i, v) for i, v in enumerate(f.coeffs) if v != 0 and i != piv]

    # bucket terms of p by their t_piv exponent
    buckets: dict[int, dict] = {}
    for e, v in p.terms.items():
        buckets.setdefault(e[piv], {})[e] = v
    top = max(buckets)
    if top == 0:
        return None
    quotient: dict = {}
    for k in range(top, 0, -1):
        layer = buckets.get(k)
        if not layer:
            continue
        for e, v in layer.items():
            qc = _norm_coeff(Fraction(v) / c)
            eq = list(e)
            eq[piv] = k - 1
            eq = tuple(eq)
            quotient[eq] = _norm_coeff(quotient.get(eq, 0) + qc)
            # subtract qc * t^eq * g from the lower layer
            lower = buckets.setdefault(k - 1, {})
            for i, gi in g:
                el = list(eq)
                el[i] += 1
                el = tuple(el)
                s = lower.get(el, 0) - qc * gi
                if s == 0:
                    lower.pop(el, None)
                else:
                    lower[el] = s
        buckets[k] = {}
    remainder = {e: v for e, v in buckets.get(0, {}).items() if v != 0}
    if remainder:
        return None
    return Polynomial(p.nvars, quotient)


class NotPolynomialError(ArithmeticError):
    """A fraction that was required to be polynomial kept a denominator."""

    def __init__(self, residual_denominator, message="denominator did not cancel"):
        super().__init__(message)
        self.residual_denominator = residual_denominator


class LinearDenomFraction:
    """scalar * num / prod(f_i^m_i) with pairwise non-proportional linear
    denominators.

    Construction normalizes everything: denominator forms are stored
    primitive (coprime integer coefficients, positive lead), the numerator is
    primitive as well, and every form that divides the numerator has been
    cancelled.  Equality is therefore plain field-by-field comparison.
    """

    __slots__ = ("num", "scalar", "denom")

    def __init__(self, num: Polynomial, scalar=1, denom=()):
        scalar = Fraction(scalar)
        merged: dict[LinearForm, int] = {}
        for form, mult in denom:
            if mult < 0:
                raise ValueError("negative denominator multiplicity")
            if mult == 0:
                continue
            s, prim = form.primitive()
            scalar /= s ** mult
            merged[prim] = merged.get(prim, 0) + mult
        if num.is_zero() or scalar == 0:
            self.num = Polynomial.zero(num.nvars)
            self.scalar = Fraction(0)
            self.denom = ()
            return
        # cancel maximally
        for form in list(merged):
            while merged[form] > 0:
                q = divide_exact(num, form)
                if q is None:
                    break
                num = q
                merged[form] -= 1
            if merged[form] == 0:
                del merged[form]
        content, num = num.content_primitive()
        self.num = num
        self.scalar = scalar * content
        self.denom = tuple(sorted(merged.items(), key=lambda kv: kv[0].coeffs))

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "LinearDenomFraction":
        return cls(p)

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.denom

    def to_polynomial(self) -> Polynomial:
        if self.denom:
            raise NotPolynomialError(self.denom)
        return self.num.scale(self.scalar)

    def __eq__(self, other) -> bool:
        return (isinstance(other, LinearDenomFraction)
                and self.scalar == other.scalar
                and self.num == other.num
                and self.denom == other.denom)

    def __hash__(self) -> int:
        return hash((self.scalar, self.num, self.denom))

    def __add__(self, other: "LinearDenomFraction") -> "LinearDenomFraction":
        return frac_add(self, other)

    def render(self, names=None) -> str:
        num = self.num.scale(self.scalar)
        if not self.denom:
            return num.render(names)
        dens = []
        for form, mult in self.denom:
            s = f"({form.render(names)})"
            dens.append(f"{s}^{mult}" if mult > 1 else s)
        return f"({num.render(names)}) / ({'*'.join(dens)})"

    def __repr__(self) -> str:
        return f"LinearDenomFraction({self.render()})"


def frac_add(a: LinearDenomFraction, b: LinearDenomFraction) -> LinearDenomFraction:
    """Exact sum over the least common denominator, re-normalized."""
    return frac_sum([a, b])


def frac_sum(fractions) -> LinearDenomFraction:
    """Sum of many fractions over one shared denominator.

    Equivalent to folding frac_add (which is associative), but builds the
    common denominator once; this is the shape of the facet sums.
    """
    fractions = list(fractions)
    if not fractions:
        raise ValueError("frac_sum needs at least one fraction")
    nvars = fractions[0].nvars
    fractions = [f for f in fractions if not f.is_zero()]
    if not fractions:
        return zero_fraction(nvars)
    common: dict[LinearForm, int] = {}
    for f in fractions:
        for form, mult in f.denom:
            common[form] = max(common.get(form, 0), mult)
    total = Polynomial.zero(nvars)
    for f in fractions:
        have = dict(f.denom)
        missing = Polynomial.constant(nvars, 1)
        for form, mult in common.items():
            extra = mult - have.get(form, 0)
            for _ in range(extra):
                missing = missing * form.to_polynomial()
        total = total + (f.num * missing).scale(f.scalar)
    return LinearDenomFraction(total, 1, tuple(common.items()))


def zero_fraction(nvars: int) -> LinearDenomFraction:
    return LinearDenomFraction(Polynomial.zero(nvars))


def product_of_forms(forms, nvars: int) -> Polynomial:
    """Expanded product of linear forms (empty product = 1)."""
    return reduce(lambda p, f: p * f.to_polynomial(),
                  forms, Polynomial.constant(nvars, 1))
