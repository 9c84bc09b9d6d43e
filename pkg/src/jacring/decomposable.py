"""Linear algebra around decomposable forms in the Jacobian ideal of a plane curve.

* ``f_v(A, B) = A*F + B*F_v`` from ``S^{p-d} + S^{p-d+1}`` into ``J^p``;
* the quadric locus ``Y = {[alpha] : alpha^2 in J}`` in ``P(R^{d-3})`` and the
  fibres ``{beta : alpha*beta in J}`` of the incidence correspondence;
* a Ruppert/Gao absolute-irreducibility test used to collect pointwise
  evidence that sampled elements ``A*F + B*F_v`` are not products of forms;
* the integer identities of the dimension count.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import linalg
from .errors import AlphaInIdeal, PreconditionError, ZeroVectorError
from .fields import FieldSpec
from .linalg import RankMatrix
from .poly import (
    GradedPolynomial,
    directional_derivative,
    monomial_basis,
    monomial_index,
    num_monomials,
)
from .ring import JacobianRing, build_jacobian_ring


@dataclass(frozen=True)
class SegreSpec:
    """Split of a total degree ``p`` as ``(floor(p/2), p - floor(p/2))``."""

    p: int

    @property
    def split(self) -> tuple:
        k = self.p // 2
        return k, self.p - k


# --- f_v ------------------------------------------------------------------------------


@dataclass
class FvReport:
    d: int
    p: int
    rank: int
    expected: int

    @property
    def injective(self) -> bool:
        return self.rank == self.expected

    def to_json(self) -> dict:
        return {"d": self.d, "p": self.p, "rank": self.rank, "expected": self.expected, "injective": self.injective}


def f_v_matrix(F: GradedPolynomial, v: Sequence, p: int, field: FieldSpec) -> RankMatrix:
    F = F.change_field(field)
    d = F.degree
    if p < d - 1:
        raise PreconditionError(f"need p >= d - 1 = {d - 1}")
    Fv = directional_derivative(F, v)
    n = F.n
    cols = [F * GradedPolynomial.monomial(m, 1, field) for m in (monomial_basis(n, p - d) if p >= d else ())]
    cols += [Fv * GradedPolynomial.monomial(m, 1, field) for m in monomial_basis(n, p - d + 1)]
    return RankMatrix.from_columns([c.to_vector() for c in cols], num_monomials(n, p), field)


def f_v_rank(F: GradedPolynomial, v: Sequence, p: int, field: FieldSpec) -> FvReport:
    """Rank of ``(A, B) -> A*F + B*F_v`` and the injective value ``s_{p-d} + s_{p-d+1}``."""
    d = F.degree
    m = f_v_matrix(F, v, p, field)
    return FvReport(d, p, m.rank(), num_monomials(F.n, p - d) + num_monomials(F.n, p - d + 1))


def random_E_v_element(F: GradedPolynomial, p: int, field: FieldSpec, rng) -> GradedPolynomial:
    """``A*F + B*F_v`` with random ``v``, ``A`` and ``B`` (``A = 0`` when ``p < d``)."""
    F = F.change_field(field)
    n, d = F.n, F.degree
    while True:
        v = [int(x) for x in rng.integers(0, field.p, size=n + 1)]
        if any(v):
            break
    Fv = directional_derivative(F, v)
    B = GradedPolynomial.from_vector(n, p - d + 1, [int(x) for x in rng.integers(0, field.p, size=num_monomials(n, p - d + 1))], field)
    out = B * Fv
    if p >= d:
        A = GradedPolynomial.from_vector(n, p - d, [int(x) for x in rng.integers(0, field.p, size=num_monomials(n, p - d))], field)
        out = out + A * F
    return out


# --- the locus Y and its incidence fibres ---------------------------------------------


def _check_plane_ring(ring: JacobianRing, alpha: GradedPolynomial) -> int:
    if ring.F is None or ring.n != 2:
        raise PreconditionError("need the Jacobian ring of a plane curve")
    d = ring.F.degree
    if d < 5:
        raise PreconditionError("need d >= 5")
    if alpha.degree != d - 3:
        raise PreconditionError(f"alpha must have degree d - 3 = {d - 3}")
    if ring.in_ideal(alpha):
        raise AlphaInIdeal("alpha vanishes in R^{d-3}")
    return d


def membership_Y(ring: JacobianRing, alpha: GradedPolynomial) -> bool:
    """Whether ``alpha^2`` lies in ``J^{2d-6}``."""
    _check_plane_ring(ring, alpha)
    alpha = alpha.change_field(ring.field)
    return ring.in_ideal(alpha * alpha)


@dataclass
class FiberReport:
    alpha: GradedPolynomial
    basis: List[GradedPolynomial]  # basis of {beta in S^{d-3} : alpha*beta in J}
    ideal_part: int  # dim J^{d-3}, zero for d >= 5

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def projective_dim(self) -> int:
        """Dimension of ``P(K_{d-3}(alpha))``: affine dimension minus ``J^{d-3}`` minus one."""
        return self.dim - self.ideal_part - 1

    def contains(self, beta: GradedPolynomial) -> bool:
        if not self.basis:
            return beta.is_zero()
        fld = beta.field
        m = RankMatrix.from_columns([b.to_vector() for b in self.basis], len(beta.to_vector()), fld)
        aug = RankMatrix.from_columns([b.to_vector() for b in self.basis] + [beta.to_vector()], len(beta.to_vector()), fld)
        return aug.rank() == m.rank()

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha.to_text(),
            "dim": self.dim,
            "ideal_part": self.ideal_part,
            "projective_dim": self.projective_dim,
            "basis": [b.to_text() for b in self.basis],
        }


def incidence_fiber(ring: JacobianRing, alpha: GradedPolynomial) -> FiberReport:
    """``{beta in S^{d-3} : alpha*beta in J^{2d-6}}`` for ``[alpha]`` in ``Y``.

    The returned space lives in ``S^{d-3}`` itself (not in ``R^{d-3}``), so it
    is the preimage of ``K_{d-3}(alpha)`` and contains ``J^{d-3}``.
    """
    d = _check_plane_ring(ring, alpha)
    alpha = alpha.change_field(ring.field)
    if not ring.in_ideal(alpha * alpha):
        raise PreconditionError("alpha is not on Y")
    fld = ring.field
    basis = monomial_basis(2, d - 3)
    products = [alpha * GradedPolynomial.monomial(m, 1, fld) for m in basis]
    mat = RankMatrix(ring.normal_form_matrix(2 * d - 6, products), fld)
    kernel = [GradedPolynomial.from_vector(2, d - 3, v, fld) for v in mat.kernel_basis()]
    return FiberReport(alpha, kernel, ring.piece(d - 3).ideal_dim)


def tangent_dim_Y(ring: JacobianRing, alpha: GradedPolynomial) -> int:
    """Projective tangent-space dimension of ``Y`` at ``[alpha]``.

    ``Y`` is cut out by ``alpha -> alpha^2 mod J``, whose differential at
    ``alpha`` is ``beta -> 2*alpha*beta mod J``; its kernel is the incidence
    fibre space.  The value bounds from above the dimension of every component
    of ``Y`` through a smooth point ``[alpha]``.  It says nothing more.
    """
    fib = incidence_fiber(ring, alpha)
    if not ring.field.exceeds(2):
        raise PreconditionError("characteristic 2 kills the differential")
    return fib.projective_dim


# --- absolute irreducibility probe ------------------------------------------------------


class ProbeVerdict(str, enum.Enum):
    NOT_DECOMPOSABLE = "not-decomposable-evidence"
    DECOMPOSABLE = "decomposable-detected"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ProbeResult:
    verdict: ProbeVerdict
    nullity: Optional[int]
    trials_used: int

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "nullity": self.nullity, "trials_used": self.trials_used}


def _univariate_gcd_degree(a: List[int], b: List[int], p: int) -> int:
    """Degree of ``gcd(a, b)`` over ``F_p``; coefficient lists are lowest degree first."""

    def trim(c):
        while c and c[-1] % p == 0:
            c.pop()
        return c

    a, b = trim([x % p for x in a]), trim([x % p for x in b])
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            f = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] = (a[shift + i] - f * c) % p
            trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def _bivariate(P: GradedPolynomial, A: np.ndarray) -> Dict[tuple, int]:
    """Dehomogenize ``P(A @ (x, y, z))`` at ``z = 1``: dict ``(i, j) -> coeff``."""
    fld = P.field
    forms = [GradedPolynomial.linear_form([int(c) for c in A[i]], fld) for i in range(3)]
    Q = P.evaluate_linear_substitution(forms)
    return {(m[0], m[1]): c for m, c in Q.coeffs.items()}


def _gao_nullity(f: Dict[tuple, int], m: int, n: int, p: int) -> int:
    """Dimension of the solution space of ``d/dy(g/f) = d/dx(h/f)``.

    Unknowns: ``g`` with ``deg_x <= m-1, deg_y <= n`` and ``h`` with
    ``deg_x <= m, deg_y <= n-1``.  Cleared of denominators the equation reads
    ``f*g_y - g*f_y - f*h_x + h*f_x = 0``, a polynomial of bidegree at most
    ``(2m-1, 2n-1)``.
    """
    fx = {(i - 1, j): c * i % p for (i, j), c in f.items() if i}
    fy = {(i, j - 1): c * j % p for (i, j), c in f.items() if j}
    W = 2 * n  # y-stride of the equation coefficients
    ncols = m * (n + 1) + (m + 1) * n
    mat = np.zeros((2 * m * 2 * n, ncols), dtype=np.int64)

    def acc(col, poly, shift, scale):
        a, b = shift
        for (i, j), c in poly.items():
            mat[(i + a) * W + (j + b), col] = (mat[(i + a) * W + (j + b), col] + c * scale) % p

    col = 0
    for a in range(m):
        for b in range(n + 1):
            # g = x^a y^b:  f * b x^a y^{b-1} - x^a y^b * f_y
            if b:
                acc(col, f, (a, b - 1), b)
            acc(col, fy, (a, b), p - 1)
            col += 1
    for a in range(m + 1):
        for b in range(n):
            # h = x^a y^b:  -f * a x^{a-1} y^b + x^a y^b * f_x
            if a:
                acc(col, f, (a - 1, b), p - a % p)
            acc(col, fx, (a, b), 1)
            col += 1
    return ncols - RankMatrix(mat, FieldSpec(p)).rank()


def irreducibility_probe(P: GradedPolynomial, trials: int, rng) -> ProbeResult:
    """Absolute-irreducibility test for a ternary form over ``F_p``.

    Each trial moves ``P`` by a random linear change of coordinates and sets
    ``z = 1``, giving ``f(x, y)`` of bidegree ``(deg P, deg P)``.  A chart is
    usable when ``f`` keeps full degree in ``x`` and ``y`` and ``f(x, y0)`` is
    squarefree at a random ``y0`` (which forces ``gcd(f, f_x) = 1``).  On a
    usable chart the Gao/Ruppert solution space has dimension equal to the
    number of absolutely irreducible factors: 1 is returned as
    not-decomposable evidence, more as decomposable.  If no usable chart turns
    up the answer is inconclusive.
    """
    if P.n != 2:
        raise PreconditionError("probe works on ternary forms")
    if P.is_zero():
        raise ZeroVectorError("zero polynomial")
    fld = P.field
    if fld.p is None:
        raise PreconditionError("probe needs a prime field")
    p = fld.p
    deg = P.degree
    if deg < 1:
        raise PreconditionError("need degree >= 1")
    if deg == 1:
        return ProbeResult(ProbeVerdict.NOT_DECOMPOSABLE, 1, 0)
    if p <= (2 * deg - 1) * deg:
        raise PreconditionError("characteristic too small for the differential test")
    for t in range(1, trials + 1):
        A = rng.integers(0, p, size=(3, 3))
        if linalg.RankMatrix(A, fld).rank() < 3:
            continue
        f = _bivariate(P, A)
        if f.get((deg, 0), 0) == 0 or f.get((0, deg), 0) == 0:
            continue
        y0 = int(rng.integers(0, p))
        fy0 = [0] * (deg + 1)
        for (i, j), c in f.items():
            fy0[i] = (fy0[i] + c * pow(y0, j, p)) % p
        dfy0 = [i * fy0[i] % p for i in range(1, deg + 1)]
        if _univariate_gcd_degree(fy0, dfy0, p) != 0:
            continue
        nullity = _gao_nullity(f, deg, deg, p)
        verdict = ProbeVerdict.NOT_DECOMPOSABLE if nullity == 1 else ProbeVerdict.DECOMPOSABLE
        return ProbeResult(verdict, nullity, t)
    return ProbeResult(ProbeVerdict.INCONCLUSIVE, None, trials)


# --- dimension arithmetic -------------------------------------------------------------


def s_poly(k: int) -> int:
    """``binom(k + 2, 2)`` continued as the polynomial ``(k + 1)(k + 2)/2``."""
    return (k + 1) * (k + 2) // 2


def s_dim(k: int) -> int:
    return comb(k + 2, 2) if k >= 0 else 0


@dataclass
class ArithmeticCheck:
    d: int
    verdicts: Dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        return {"d": self.d, "ok": self.ok, "verdicts": self.verdicts}


def dimension_arithmetic_check(d: int) -> ArithmeticCheck:
    """Exact integer identities of the dimension count for plane curves of degree ``d``.

    (i)   dim P(J^{2d-4}) = s_{2d-4} - s_{d-2} - 1 = (3d^2 - 9d + 4)/2
    (ii)  dim D^{2d-4} = 2(s_{d-2} - 1) = (d-2)(d+1), dim P(S^{2d-4}) = (d-2)(2d-1)
    (iii) expected dimension (ii) + (i) - dim P(S^{2d-4}) = (d-2)(d+1)/2 - 1, and it
          equals (i) - s_{d-4} - s_{d-3}
    (iv)  g - 1 = d(d-3)/2; s_{2d-6} - s_d - s_{d-6} - s_{d-5} + 9 = (d-1)(d-4)/2;
          d(d-3) < (d-1)(d-4) holds iff d < 2
    In (iv) the ``s`` are the polynomial continuation; for ``d >= 6`` (where the
    bound is used) it agrees with the true dimensions, which is checked too.
    """
    if d < 3:
        raise PreconditionError("need d >= 3")
    s = s_dim
    v: Dict[str, bool] = {}
    pj = s(2 * d - 4) - s(d - 2) - 1
    v["i"] = 2 * pj == 3 * d * d - 9 * d + 4
    dD = 2 * (s(d - 2) - 1)
    dS = s(2 * d - 4) - 1
    v["ii"] = dD == (d - 2) * (d + 1) and dS == (d - 2) * (2 * d - 1)
    edim = dD + pj - dS
    v["iii"] = 2 * (edim + 1) == (d - 2) * (d + 1) and edim == pj - s(d - 4) - s(d - 3)
    g = (d - 1) * (d - 2) // 2
    bound = s_poly(2 * d - 6) - s_poly(d) - s_poly(d - 6) - s_poly(d - 5) + 9
    chain = 2 * (g - 1) == d * (d - 3) and 2 * bound == (d - 1) * (d - 4)
    if d >= 6:
        chain = chain and bound == s(2 * d - 6) - s(d) - s(d - 6) - s(d - 5) + 9
    chain = chain and ((d * (d - 3) < (d - 1) * (d - 4)) == (d < 2))
    v["iv"] = chain
    return ArithmeticCheck(d, v)
