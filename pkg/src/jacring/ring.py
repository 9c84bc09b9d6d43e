"""Graded Artinian quotients ``R = S/J`` of the polynomial ring.

``J`` is generated by ``n + 1`` forms; for a Jacobian ring they are the
partials of a hypersurface equation ``F``.  Each graded piece ``J^k`` is
computed by row reducing the monomial multiples of the generators inside
``S^k``; the non-pivot monomials (graded-lex order) form the basis of ``R^k``.
When every generator is a single term (Fermat, monomial complete
intersections) the pivots are just the monomials lying in ``J`` and no
elimination is needed.

Only degrees ``0 .. N + 1`` are served, ``N`` being the socle degree
``sum(deg g_i - 1)``; the ring is Artinian (``F`` smooth) iff ``r_{N+1} = 0``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import linalg
from .errors import (
    AlphaInIdeal,
    CharacteristicTooSmall,
    DegreeOutOfRange,
    InvariantBreach,
    PreconditionError,
    SingularRingError,
)
from .fields import QQ, FieldSpec
from .linalg import RankMatrix
from .poly import (
    GradedPolynomial,
    gradient,
    monomial_basis,
    monomial_index,
    num_monomials,
    random_form,
)


@dataclass
class GradedPiece:
    degree: int
    standard: tuple  # basis of R^k
    position: Dict[tuple, int]  # standard monomial -> coordinate
    pivot_row: Dict[tuple, int]  # monomial of S^k that is a pivot of J^k -> row of `reducer`
    reducer: Optional[np.ndarray]  # rank(J^k) x r_k, None for monomial ideals

    @property
    def dim(self) -> int:
        return len(self.standard)

    @property
    def ideal_dim(self) -> int:
        return len(self.pivot_row)


class JacobianRing:
    """``S/(g_0, ..., g_n)`` with per-degree bases built lazily and cached.

    Use :func:`build_jacobian_ring` or :func:`monomial_ci_ring` rather than
    calling this directly.
    """

    def __init__(self, generators: Sequence[GradedPolynomial], field: FieldSpec, F: Optional[GradedPolynomial] = None):
        if not generators:
            raise PreconditionError("need at least one generator")
        self.n = generators[0].n
        self.field = field
        self.generators = tuple(g.change_field(field) for g in generators)
        self.F = F.change_field(field) if F is not None else None
        self.socle_degree = sum(max(g.degree, 1) - 1 for g in self.generators if not g.is_zero())
        self.is_monomial = all(len(g.coeffs) <= 1 for g in self.generators)
        self._pieces: Dict[int, GradedPiece] = {}
        self._lock = threading.Lock()

    @property
    def N(self) -> int:
        return self.socle_degree

    @property
    def d(self) -> Optional[int]:
        return self.F.degree if self.F is not None else None

    def __repr__(self) -> str:
        what = f"F={self.F.to_text()}" if self.F is not None else f"{len(self.generators)} generators"
        return f"JacobianRing(n={self.n}, N={self.N}, {what}, {self.field})"

    # --- graded pieces --------------------------------------------------------

    def piece(self, k: int) -> GradedPiece:
        if k < 0 or k > self.N + 1:
            raise DegreeOutOfRange(f"degree {k} outside 0..{self.N + 1}")
        pc = self._pieces.get(k)
        if pc is None:
            with self._lock:
                pc = self._pieces.get(k)
                if pc is None:
                    pc = self._build_piece(k)
                    self._pieces[k] = pc
        return pc

    def _build_piece(self, k: int) -> GradedPiece:
        basis = monomial_basis(self.n, k)
        if self.is_monomial:
            lead = [next(iter(g.coeffs)) for g in self.generators if g.coeffs]
            in_ideal = [m for m in basis if any(all(a >= b for a, b in zip(m, g)) for g in lead)]
            inset = set(in_ideal)
            standard = tuple(m for m in basis if m not in inset)
            return GradedPiece(k, standard, {m: i for i, m in enumerate(standard)},
                               {m: i for i, m in enumerate(in_ideal)}, None)
        idx = monomial_index(self.n, k)
        rows = []
        for g in self.generators:
            if g.is_zero() or g.degree > k:
                continue
            terms = [(m, c) for m, c in g.coeffs.items()]
            for mult in monomial_basis(self.n, k - g.degree):
                rows.append([(idx[tuple(a + b for a, b in zip(mult, m))], c) for m, c in terms])
        gen = linalg.zeros(len(rows), len(basis), self.field)
        for r, entries in enumerate(rows):
            for j, c in entries:
                gen[r, j] = c
        ech = linalg.rref(gen, self.field)
        pivset = set(ech.pivots)
        std_cols = [j for j in range(len(basis)) if j not in pivset]
        standard = tuple(basis[j] for j in std_cols)
        reducer = ech.rows[:, std_cols] if std_cols else linalg.zeros(ech.rank, 0, self.field)
        return GradedPiece(k, standard, {m: i for i, m in enumerate(standard)},
                           {basis[c]: i for i, c in enumerate(ech.pivots)}, reducer)

    def dim(self, k: int) -> int:
        """``r_k``; zero for negative degrees."""
        if k < 0:
            return 0
        return self.piece(k).dim

    def hilbert_function(self) -> List[int]:
        """``[r_0, ..., r_N]``."""
        return [self.dim(k) for k in range(self.N + 1)]

    @property
    def smooth(self) -> bool:
        return self.dim(self.N + 1) == 0

    def require_smooth(self):
        if not self.smooth:
            raise SingularRingError("ring is not Artinian (hypersurface is singular)")

    def standard_monomials(self, k: int) -> tuple:
        return self.piece(k).standard

    # --- normal forms ---------------------------------------------------------

    def _coerce(self, f: GradedPolynomial) -> GradedPolynomial:
        if f.n != self.n:
            raise PreconditionError(f"polynomial has n={f.n}, ring has n={self.n}")
        return f.change_field(self.field)

    def normal_form_matrix(self, k: int, polys: Sequence[GradedPolynomial]) -> np.ndarray:
        """``r_k x len(polys)`` array whose columns are the normal forms."""
        pc = self.piece(k)
        fld = self.field
        out = linalg.zeros(pc.dim, len(polys), fld)
        piv = linalg.zeros(pc.ideal_dim, len(polys), fld) if pc.reducer is not None else None
        for j, f in enumerate(polys):
            if f.degree != k and not f.is_zero():
                raise DegreeOutOfRange(f"expected degree {k}, got {f.degree}")
            for m, c in f.coeffs.items():
                i = pc.position.get(m)
                if i is not None:
                    out[i, j] += c
                elif piv is not None:
                    piv[pc.pivot_row[m], j] += c
        if fld.p is not None:
            out %= fld.p
        if piv is not None and pc.reducer.size and piv.any():
            out = out - linalg.matmul(pc.reducer.T, piv % fld.p if fld.p is not None else piv, fld)
            if fld.p is not None:
                out %= fld.p
        return out

    def normal_form(self, f: GradedPolynomial) -> tuple:
        """Coordinates of ``f mod J`` on the standard monomials of ``R^deg f``."""
        f = self._coerce(f)
        col = self.normal_form_matrix(f.degree, [f])[:, 0]
        return tuple(int(x) if self.field.p is not None else x for x in col)

    def lift(self, k: int, coords: Sequence) -> GradedPolynomial:
        """The combination of standard monomials with the given coordinates."""
        std = self.standard_monomials(k)
        return GradedPolynomial(self.n, k, {m: c for m, c in zip(std, coords) if c != 0}, self.field)

    def reduce(self, f: GradedPolynomial) -> GradedPolynomial:
        """Canonical representative of ``f mod J`` (a combination of standard monomials)."""
        f = self._coerce(f)
        return self.lift(f.degree, self.normal_form(f))

    def in_ideal(self, f: GradedPolynomial) -> bool:
        return all(c == 0 for c in self.normal_form(f))

    def mul(self, f: GradedPolynomial, g: GradedPolynomial) -> GradedPolynomial:
        return self.reduce(self._coerce(f) * self._coerce(g))

    def power(self, f: GradedPolynomial, e: int) -> GradedPolynomial:
        """``f^e mod J``, reducing after every product."""
        f = self.reduce(f)
        out = GradedPolynomial.constant(self.n, 1, self.field)
        for _ in range(e):
            out = self.mul(out, f)
        return out

    def random_element(self, k: int, rng) -> GradedPolynomial:
        """Uniformly random element of ``R^k`` as a standard-monomial combination (``F_p`` only)."""
        if self.field.p is None:
            raise PreconditionError("random ring elements need a prime field")
        coords = [int(x) for x in rng.integers(0, self.field.p, size=self.dim(k))]
        return self.lift(k, coords)


# --- construction -----------------------------------------------------------------------


@lru_cache(maxsize=128)
def _cached_ring(F: GradedPolynomial, field: FieldSpec) -> JacobianRing:
    Fk = F.change_field(field)
    return JacobianRing(gradient(Fk), field, Fk)


def build_jacobian_ring(F: GradedPolynomial, field: Optional[FieldSpec] = None) -> JacobianRing:
    """Jacobian ring ``S/(dF/dx0, ..., dF/dxn)`` over ``field`` (default: ``F``'s own field)."""
    field = field or F.field
    if F.n < 1:
        raise PreconditionError("need at least two variables")
    if F.degree < 2:
        raise PreconditionError("hypersurface degree must be >= 2")
    if not field.exceeds(F.degree):
        raise CharacteristicTooSmall(f"need char 0 or p > {F.degree}")
    return _cached_ring(F, field)


def monomial_ci_ring(a: Sequence[int], field: FieldSpec = QQ) -> JacobianRing:
    """``K[x0..xn]/(x0^a0, ..., xn^an)``."""
    if any(x < 2 for x in a):
        raise PreconditionError("all exponents must be >= 2")
    n = len(a) - 1
    gens = [GradedPolynomial.monomial([x if j == i else 0 for j in range(n + 1)], 1, field) for i, x in enumerate(a)]
    return JacobianRing(gens, field)


def random_smooth_hypersurface(n: int, d: int, rng, primes: Sequence[int], attempts: int = 10) -> GradedPolynomial:
    """Dense integer form, coefficients uniform below ``min(primes)``, smooth mod every prime.

    The form is returned over ``QQ`` so it can be reduced mod each prime.
    """
    bound = min(primes)
    for _ in range(attempts):
        F = random_form(n, d, QQ, rng, bound=bound)
        if all(build_jacobian_ring(F, FieldSpec(p)).smooth for p in primes):
            return F
    raise PreconditionError(f"no smooth degree-{d} hypersurface found in {attempts} draws")


# --- multiplication maps ------------------------------------------------------------------


@dataclass
class MultiplicationReport:
    """``mu_s(alpha): R^s -> R^{s+e}`` in standard-monomial bases."""

    alpha: GradedPolynomial
    source_degree: int
    matrix: RankMatrix
    rank: int
    kernel: list = field(repr=False)

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel)

    @property
    def target_degree(self) -> int:
        return self.source_degree + self.alpha.degree

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha.to_text(),
            "source_degree": self.source_degree,
            "target_degree": self.target_degree,
            "shape": list(self.matrix.shape),
            "rank": self.rank,
            "kernel_dim": self.kernel_dim,
        }


def multiplication_matrix(ring: JacobianRing, alpha: GradedPolynomial, s: int) -> RankMatrix:
    alpha = ring.reduce(alpha)
    e = alpha.degree
    if s < 0 or s + e > ring.N + 1:
        raise DegreeOutOfRange(f"mu_{s} of a degree-{e} element leaves 0..{ring.N + 1}")
    products = [alpha * GradedPolynomial.monomial(m, 1, ring.field) for m in ring.standard_monomials(s)]
    return RankMatrix(ring.normal_form_matrix(s + e, products), ring.field)


def multiplication_operator(ring: JacobianRing, alpha: GradedPolynomial, s: int,
                            with_kernel: bool = True) -> MultiplicationReport:
    m = multiplication_matrix(ring, alpha, s)
    return MultiplicationReport(ring.reduce(alpha), s, m, m.rank(), m.kernel_basis() if with_kernel else [])


def multiplication_rank(ring: JacobianRing, alpha: GradedPolynomial, s: int) -> int:
    return multiplication_matrix(ring, alpha, s).rank()


def gorenstein_pairing_check(ring: JacobianRing, a: int):
    """``(perfect?, matrix)`` for the pairing ``R^a x R^{N-a} -> R^N``."""
    ring.require_smooth()
    N = ring.N
    if not 0 <= a <= N:
        raise DegreeOutOfRange(f"a must lie in 0..{N}")
    if ring.dim(N) != 1:
        raise InvariantBreach(f"socle of a smooth ring has dimension {ring.dim(N)}")
    left = ring.standard_monomials(a)
    right = ring.standard_monomials(N - a)
    fld = ring.field
    products = [GradedPolynomial.monomial(tuple(x + y for x, y in zip(u, v)), 1, fld) for u in left for v in right]
    socle = ring.normal_form_matrix(N, products)[0]
    mat = RankMatrix(np.asarray(socle).reshape(len(left), len(right)), fld)
    return mat.rank() == len(left) == len(right), mat


@dataclass
class AnnihilatorReport:
    alpha: GradedPolynomial
    quotient_dims: list  # (s, r_s - k_s)
    identity_holds: bool
    failures: list
    top_dim: int  # dim of (R/Ann(alpha)) in degree N - e

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha.to_text(),
            "quotient_dims": [list(t) for t in self.quotient_dims],
            "identity_holds": self.identity_holds,
            "failures": self.failures,
            "top_dim": self.top_dim,
            "top_is_one": self.top_dim == 1,
        }


def annihilator_quotient_dims(ring: JacobianRing, alpha: GradedPolynomial) -> AnnihilatorReport:
    """Check ``r_{N-e-s} - k_{N-e-s} = r_s - k_s`` where ``k_s = dim ker mu_s(alpha)``."""
    ring.require_smooth()
    alpha = ring.reduce(alpha)
    if alpha.is_zero():
        raise AlphaInIdeal("alpha vanishes in R")
    e, N = alpha.degree, ring.N
    q = []
    for s in range(N - e + 1):
        q.append((s, multiplication_rank(ring, alpha, s)))  # r_s - k_s is the rank
    failures = [s for s, v in q if v != q[N - e - s][1]]
    return AnnihilatorReport(alpha, q, not failures, failures, q[N - e][1])


def socle_generator(ring: JacobianRing) -> tuple:
    """Normal-form coordinates of a generator of ``R^N`` (the unique standard monomial)."""
    ring.require_smooth()
    if ring.dim(ring.N) != 1:
        raise InvariantBreach("socle is not one-dimensional")
    return (ring.field.one if ring.field.p is None else 1,)


def hilbert_oracle_fermat(n: int, d: int) -> List[int]:
    """Count monomials with every exponent <= d - 2, degree by degree."""
    N = (n + 1) * (d - 2)
    return [sum(1 for m in monomial_basis(n, k) if max(m) <= d - 2) for k in range(N + 1)]
