"""Homogeneous polynomials in ``x0..xn`` with sparse coefficients.

Monomials are exponent tuples.  Within a degree they are ordered graded
lexicographically with ``x0 > x1 > ... > xn``, i.e. descending tuple order, so
``monomial_basis(2, 2)`` starts ``x0^2, x0*x1, x0*x2, x1^2``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import (
    CharacteristicTooSmall,
    NotHomogeneousError,
    PolynomialSyntaxError,
    PreconditionError,
    ZeroVectorError,
)
from .fields import QQ, FieldSpec, Scalar

Monomial = Tuple[int, ...]


@lru_cache(maxsize=None)
def _compositions(nvars: int, k: int) -> tuple:
    if nvars == 1:
        return ((k,),)
    out = []
    for first in range(k, -1, -1):
        for rest in _compositions(nvars - 1, k - first):
            out.append((first,) + rest)
    return tuple(out)


def monomial_basis(n: int, k: int) -> tuple:
    """All degree-``k`` monomials in ``n + 1`` variables, graded-lex descending."""
    if n < 0 or k < 0:
        raise PreconditionError("need n >= 0 and k >= 0")
    return _compositions(n + 1, k)


@lru_cache(maxsize=None)
def monomial_index(n: int, k: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomial_basis(n, k))}


def num_monomials(n: int, k: int) -> int:
    """``s_k = dim S^k``; zero for negative ``k``."""
    return comb(n + k, n) if k >= 0 else 0


def _add_exp(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class GradedPolynomial:
    """A homogeneous polynomial of fixed degree over a :class:`FieldSpec`.

    The zero polynomial still carries its degree.  Instances are treated as
    immutable; every operation returns a new object.
    """

    __slots__ = ("n", "degree", "coeffs", "field")

    def __init__(self, n: int, degree: int, coeffs: Mapping[Monomial, Scalar], field: FieldSpec = QQ):
        self.n = n
        self.degree = degree
        self.field = field
        clean = {}
        for m, c in coeffs.items():
            m = tuple(m)
            if len(m) != n + 1:
                raise PreconditionError(f"monomial {m} does not have {n + 1} exponents")
            if sum(m) != degree:
                raise NotHomogeneousError(f"monomial {m} is not of degree {degree}")
            c = field(c)
            if c != 0:
                clean[m] = c
        self.coeffs = clean

    # --- constructors ----------------------------------------------------------------

    @classmethod
    def _raw(cls, n, degree, coeffs, field):
        obj = cls.__new__(cls)
        obj.n, obj.degree, obj.coeffs, obj.field = n, degree, coeffs, field
        return obj

    @classmethod
    def zero(cls, n: int, degree: int, field: FieldSpec = QQ) -> "GradedPolynomial":
        return cls._raw(n, degree, {}, field)

    @classmethod
    def constant(cls, n: int, c: Scalar = 1, field: FieldSpec = QQ) -> "GradedPolynomial":
        return cls(n, 0, {(0,) * (n + 1): c}, field)

    @classmethod
    def monomial(cls, exps: Sequence[int], c: Scalar = 1, field: FieldSpec = QQ) -> "GradedPolynomial":
        exps = tuple(exps)
        return cls(len(exps) - 1, sum(exps), {exps: c}, field)

    @classmethod
    def variable(cls, i: int, n: int, field: FieldSpec = QQ) -> "GradedPolynomial":
        if not 0 <= i <= n:
            raise PreconditionError(f"variable index {i} out of range")
        e = [0] * (n + 1)
        e[i] = 1
        return cls.monomial(e, 1, field)

    @classmethod
    def linear_form(cls, v: Sequence, field: FieldSpec = QQ) -> "GradedPolynomial":
        n = len(v) - 1
        return cls(n, 1, {tuple(int(i == j) for j in range(n + 1)): c for i, c in enumerate(v)}, field)

    @classmethod
    def from_vector(cls, n: int, degree: int, vec: Sequence, field: FieldSpec) -> "GradedPolynomial":
        """Inverse of :meth:`to_vector` on the monomial basis of ``S^degree``."""
        basis = monomial_basis(n, degree)
        return cls(n, degree, {m: c for m, c in zip(basis, vec) if c != 0}, field)

    @classmethod
    def parse(cls, text: str, field: FieldSpec = QQ, n: Optional[int] = None) -> "GradedPolynomial":
        return parse_polynomial(text, field, n)

    # --- basic protocol ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return (self.n, self.degree, self.field, self.coeffs) == (other.n, other.degree, other.field, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.degree, self.field, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"GradedPolynomial({self.to_text()!r}, deg={self.degree}, {self.field})"

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m in sorted(self.coeffs, reverse=True):
            c = self.field.signed(self.coeffs[m])
            sign = "-" if c < 0 else "+"
            c = abs(c)
            factors = [f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e]
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append((sign, "*".join(factors)))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {t}" for s, t in parts[1:])

    def _check(self, other: "GradedPolynomial"):
        if self.n != other.n or self.field != other.field:
            raise PreconditionError("polynomials live in different rings")

    def __add__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        self._check(other)
        if self.degree != other.degree and self.coeffs and other.coeffs:
            raise NotHomogeneousError("cannot add forms of different degrees")
        degree = self.degree if self.coeffs else other.degree
        out = dict(self.coeffs)
        p = self.field.p
        for m, c in other.coeffs.items():
            v = out.get(m, 0) + c
            if p is not None:
                v %= p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GradedPolynomial._raw(self.n, degree, out, self.field)

    def __neg__(self) -> "GradedPolynomial":
        return self.scale(-1)

    def __sub__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        return self + (-other)

    def scale(self, c) -> "GradedPolynomial":
        c = self.field(c)
        if c == 0:
            return GradedPolynomial.zero(self.n, self.degree, self.field)
        p = self.field.p
        if p is None:
            coeffs = {m: v * c for m, v in self.coeffs.items()}
        else:
            coeffs = {m: v * c % p for m, v in self.coeffs.items()}
        return GradedPolynomial._raw(self.n, self.degree, coeffs, self.field)

    def __mul__(self, other):
        if isinstance(other, GradedPolynomial):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "GradedPolynomial":
        if e < 0:
            raise PreconditionError("negative exponent")
        result = GradedPolynomial.constant(self.n, 1, self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def to_vector(self) -> list:
        """Coefficients on ``monomial_basis(n, degree)``."""
        idx = monomial_index(self.n, self.degree)
        vec = [self.field.zero] * len(idx)
        for m, c in self.coeffs.items():
            vec[idx[m]] = c
        return vec

    def change_field(self, field: FieldSpec) -> "GradedPolynomial":
        """Reduce a rational polynomial mod ``p`` (or return self when fields match)."""
        if field == self.field:
            return self
        if not self.field.is_rational:
            raise PreconditionError(f"cannot move a polynomial over {self.field} to {field}")
        return GradedPolynomial(self.n, self.degree, self.coeffs, field)

    def evaluate_linear_substitution(self, forms: Sequence["GradedPolynomial"]) -> "GradedPolynomial":
        """``self(forms[0], ..., forms[n])`` for linear forms in any number of variables."""
        m = forms[0].n
        out = GradedPolynomial.zero(m, self.degree, self.field)
        powers = [[GradedPolynomial.constant(m, 1, self.field)] for _ in forms]
        for mono, c in self.coeffs.items():
            term = GradedPolynomial.constant(m, c, self.field)
            for i, e in enumerate(mono):
                while len(powers[i]) <= e:
                    powers[i].append(powers[i][-1] * forms[i])
                if e:
                    term = term * powers[i][e]
            out = out + term
        return out


def multiply(f: GradedPolynomial, g: GradedPolynomial) -> GradedPolynomial:
    f._check(g)
    out: Dict[Monomial, Scalar] = {}
    for mf, cf in f.coeffs.items():
        for mg, cg in g.coeffs.items():
            m = _add_exp(mf, mg)
            out[m] = out.get(m, 0) + cf * cg
    p = f.field.p
    if p is not None:
        out = {m: c % p for m, c in out.items() if c % p}
    else:
        out = {m: c for m, c in out.items() if c}
    return GradedPolynomial._raw(f.n, f.degree + g.degree, out, f.field)


def partial_derivative(f: GradedPolynomial, i: int) -> GradedPolynomial:
    if not 0 <= i <= f.n:
        raise PreconditionError(f"variable index {i} out of range for n={f.n}")
    if f.degree == 0:
        return GradedPolynomial.zero(f.n, 0, f.field)
    out = {}
    for m, c in f.coeffs.items():
        e = m[i]
        if e:
            dm = m[:i] + (e - 1,) + m[i + 1:]
            out[dm] = c * e
    return GradedPolynomial(f.n, f.degree - 1, out, f.field)


def gradient(f: GradedPolynomial) -> list:
    return [partial_derivative(f, i) for i in range(f.n + 1)]


def euler_check(f: GradedPolynomial) -> bool:
    """Whether ``sum_i x_i * d_i f == deg(f) * f``."""
    if not f.field.exceeds(f.degree):
        raise CharacteristicTooSmall(f"Euler identity needs char 0 or p > {f.degree}")
    lhs = GradedPolynomial.zero(f.n, f.degree, f.field)
    for i, df in enumerate(gradient(f)):
        lhs = lhs + GradedPolynomial.variable(i, f.n, f.field) * df
    return lhs == f.scale(f.degree)


def fermat(n: int, d: int, field: FieldSpec = QQ) -> GradedPolynomial:
    if d < 2:
        raise PreconditionError("Fermat degree must be >= 2")
    return GradedPolynomial(n, d, {tuple(d if j == i else 0 for j in range(n + 1)): 1 for i in range(n + 1)}, field)


def hyperplane_sum(n: int, field: FieldSpec = QQ) -> GradedPolynomial:
    """``x0 + ... + xn``."""
    return GradedPolynomial.linear_form([1] * (n + 1), field)


def socle_monomial(n: int, d: int, field: FieldSpec = QQ) -> GradedPolynomial:
    """``(x0 * ... * xn)^(d-2)``."""
    return GradedPolynomial.monomial([d - 2] * (n + 1), 1, field)


def directional_derivative(f: GradedPolynomial, v: Sequence) -> GradedPolynomial:
    """``sum_i v_i * d_i f``."""
    if len(v) != f.n + 1:
        raise PreconditionError("direction has the wrong length")
    v = [f.field(c) for c in v]
    if all(c == 0 for c in v):
        raise ZeroVectorError("direction vector is zero")
    out = GradedPolynomial.zero(f.n, f.degree - 1, f.field)
    for c, df in zip(v, gradient(f)):
        out = out + df.scale(c)
    return out


def random_form(n: int, k: int, field: FieldSpec, rng, bound: Optional[int] = None) -> GradedPolynomial:
    """Dense form with coefficients uniform in ``[0, bound)`` (default: the field size).

    Over ``QQ`` a bound is required; coefficients are then integers.
    """
    if bound is None:
        if field.p is None:
            raise PreconditionError("random rational forms need an explicit bound")
        bound = field.p
    basis = monomial_basis(n, k)
    coeffs = {m: int(rng.integers(0, bound)) for m in basis}
    return GradedPolynomial(n, k, coeffs, field)


def random_sparse_form(n: int, k: int, field: FieldSpec, rng, terms: int, bound: int) -> GradedPolynomial:
    """Sum of ``terms`` distinct random monomials with nonzero coefficients below ``bound``."""
    basis = monomial_basis(n, k)
    picks = rng.choice(len(basis), size=min(terms, len(basis)), replace=False)
    return GradedPolynomial(n, k, {basis[int(i)]: int(rng.integers(1, bound)) for i in picks}, field)


# --- text grammar -----------------------------------------------------------------------

_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)(?:\*|$))?(.*)$")
_FACTOR = re.compile(r"^x(\d)(?:\^(\d+))?$")


def parse_polynomial(text: str, field: FieldSpec = QQ, n: Optional[int] = None) -> GradedPolynomial:
    """Parse ``"x0^4 + x1^4 - 3/2*x0*x1^3"`` style input.

    ``n`` defaults to the largest variable index that occurs.
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise PolynomialSyntaxError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    chunks = re.findall(r"([+-])([^+-]*)", s)
    if "".join(sign + body for sign, body in chunks) != s:
        raise PolynomialSyntaxError(f"cannot parse {text!r}")
    terms = []
    top = 0
    for sign, body in chunks:
        if not body:
            raise PolynomialSyntaxError(f"dangling sign in {text!r}")
        m = _TERM.match(body)
        coeff_txt, rest = m.group(1), m.group(2)
        if coeff_txt is None and not rest:
            raise PolynomialSyntaxError(f"bad term {body!r}")
        try:
            coeff = Fraction(coeff_txt) if coeff_txt else Fraction(1)
        except ZeroDivisionError:
            raise PolynomialSyntaxError(f"zero denominator in {body!r}") from None
        if sign == "-":
            coeff = -coeff
        exps: Dict[int, int] = {}
        if rest:
            for factor in rest.split("*"):
                fm = _FACTOR.match(factor)
                if not fm:
                    raise PolynomialSyntaxError(f"bad factor {factor!r} in {text!r}")
                i = int(fm.group(1))
                exps[i] = exps.get(i, 0) + int(fm.group(2) or 1)
                top = max(top, i)
        terms.append((coeff, exps))
    if n is None:
        n = top
    elif top > n:
        raise PolynomialSyntaxError(f"variable x{top} exceeds n={n}")
    degrees = {sum(e.values()) for c, e in terms}
    if len(degrees) != 1:
        raise NotHomogeneousError(f"{text!r} is not homogeneous")
    coeffs: Dict[Monomial, object] = {}
    for c, e in terms:
        mono = tuple(e.get(i, 0) for i in range(n + 1))
        coeffs[mono] = coeffs.get(mono, 0) + c
    return GradedPolynomial(n, degrees.pop(), coeffs, field)
