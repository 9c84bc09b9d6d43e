"""Weak and strong Lefschetz checks, property (*) for Fermat rings, and the
kernel-square check for maximal-rank multiplication maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import List, Optional

import numpy as np

from . import linalg
from .errors import CharacteristicTooSmall, DegreeOutOfRange, InvariantBreach, PreconditionError
from .fields import FieldSpec
from .linalg import RankMatrix
from .poly import GradedPolynomial, fermat, hyperplane_sum, monomial_basis, num_monomials
from .ring import JacobianRing, build_jacobian_ring, multiplication_matrix, multiplication_operator


@dataclass
class LefschetzRow:
    k: int
    power: int
    source_dim: int
    target_dim: int
    rank: int

    @property
    def maximal(self) -> bool:
        return self.rank == min(self.source_dim, self.target_dim)


@dataclass
class LefschetzReport:
    witness: GradedPolynomial
    rows: List[LefschetzRow]
    strong: bool  # whether powers > 1 were examined

    @property
    def wlp(self) -> bool:
        return all(r.maximal for r in self.rows if r.power == 1)

    @property
    def slp(self) -> Optional[bool]:
        if not self.strong:
            return None
        return all(r.maximal for r in self.rows)

    def failures(self) -> List[LefschetzRow]:
        return [r for r in self.rows if not r.maximal]

    def to_json(self) -> dict:
        return {
            "witness": self.witness.to_text(),
            "wlp": self.wlp,
            "slp": self.slp,
            "rows": [[r.k, r.power, r.source_dim, r.target_dim, r.rank, r.maximal] for r in self.rows],
        }


def _check_linear(ring: JacobianRing, L: GradedPolynomial) -> GradedPolynomial:
    if L.degree != 1 and not L.is_zero():
        raise PreconditionError("Lefschetz witness must be a linear form")
    if L.is_zero():
        return GradedPolynomial.zero(ring.n, 1, ring.field)
    return L.change_field(ring.field)


def wlp_check(ring: JacobianRing, L: GradedPolynomial) -> LefschetzReport:
    """Rank of ``L: R^k -> R^{k+1}`` against ``min(r_k, r_{k+1})`` for ``0 <= k < N``."""
    ring.require_smooth()
    L = _check_linear(ring, L)
    rows = []
    for k in range(ring.N):
        m = multiplication_matrix(ring, L, k)
        rows.append(LefschetzRow(k, 1, ring.dim(k), ring.dim(k + 1), m.rank()))
    return LefschetzReport(L, rows, strong=False)


def slp_check(ring: JacobianRing, L: GradedPolynomial) -> LefschetzReport:
    """Rank of ``L^c: R^k -> R^{k+c}`` for all ``k >= 0, c >= 1, k + c <= N``.

    ``L^c`` acts as the composite of the ``c`` single steps, so the matrices are
    built by chaining the degree-one multiplication matrices.
    """
    ring.require_smooth()
    if not ring.field.exceeds(ring.N):
        raise CharacteristicTooSmall(f"SLP checks need char 0 or p > N = {ring.N}")
    L = _check_linear(ring, L)
    N = ring.N
    fld = ring.field
    steps = [multiplication_matrix(ring, L, k).data for k in range(N)]
    rows = []
    for k in range(N):
        acc = steps[k]
        for c in range(1, N - k + 1):
            if c > 1:
                acc = linalg.matmul(steps[k + c - 1], acc, fld)
            rows.append(LefschetzRow(k, c, ring.dim(k), ring.dim(k + c), RankMatrix(acc, fld).rank()))
    return LefschetzReport(L, rows, strong=True)


@dataclass
class StarReport:
    n: int
    d: int
    k: int
    source_dim: int
    target_dim: int
    rank: Optional[int]
    holds: bool
    obstruction: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "n": self.n, "d": self.d, "k": self.k,
            "source_dim": self.source_dim, "target_dim": self.target_dim,
            "rank": self.rank, "holds": self.holds, "obstruction": self.obstruction,
            "lemma_predicts": self.d >= self.n + 1 and self.k <= self.d - self.n - 1,
        }


def star_property_check(n: int, d: int, k: int, field: FieldSpec) -> StarReport:
    """Is ``G -> G * H^{d(n-1)}`` injective from ``S^k`` into the Fermat ring?

    ``H`` is the sum of the variables.  Returns ``holds=False`` without any
    elimination when the target degree passes the socle or the target is
    smaller than the source.
    """
    if k < 0:
        raise PreconditionError("k must be >= 0")
    N = (n + 1) * (d - 2)
    if not field.exceeds(N):
        raise CharacteristicTooSmall(f"need char 0 or p > {N}")
    ring = build_jacobian_ring(fermat(n, d, field), field)
    e = d * (n - 1)
    src = num_monomials(n, k)
    if k + e > N:
        return StarReport(n, d, k, src, 0, 0, src == 0, "target degree exceeds the socle degree")
    tgt = ring.dim(k + e)
    if src > tgt:
        return StarReport(n, d, k, src, tgt, None, False, "source dimension exceeds target dimension")
    h = ring.power(hyperplane_sum(n, field), e)
    products = [h * GradedPolynomial.monomial(m, 1, field) for m in monomial_basis(n, k)]
    mat = RankMatrix(ring.normal_form_matrix(k + e, products), field)
    r = mat.rank()
    return StarReport(n, d, k, src, tgt, r, r == src)


def _multinomial_socle(n: int, d: int) -> int:
    return factorial((n + 1) * (d - 2)) // factorial(d - 2) ** (n + 1)


def socle_coefficient_expansion(n: int, d: int) -> int:
    """Coefficient of ``(x0...xn)^(d-2)`` in ``(x0+...+xn)^((n+1)(d-2))``, by expansion over ``ZZ``.

    Multiplies one factor at a time and discards monomials with an exponent
    above ``d - 2`` (they can never come back down).
    """
    cur = {(0,) * (n + 1): 1}
    for _ in range((n + 1) * (d - 2)):
        nxt = {}
        for m, c in cur.items():
            for i in range(n + 1):
                if m[i] < d - 2:
                    mm = m[:i] + (m[i] + 1,) + m[i + 1:]
                    nxt[mm] = nxt.get(mm, 0) + c
        cur = nxt
    return cur.get((d - 2,) * (n + 1), 0)


def socle_coefficient(n: int, d: int, field: FieldSpec):
    """The scalar ``lambda`` with ``H^{(n+1)(d-2)} = lambda * sigma`` in the Fermat ring, for ``d = n + 1``."""
    if d != n + 1:
        raise PreconditionError("the socle coefficient is defined for d = n + 1")
    lam = socle_coefficient_expansion(n, d)
    if lam != _multinomial_socle(n, d):
        raise InvariantBreach("multinomial formula disagrees with the expansion")
    value = field(lam)
    if value == 0:
        raise CharacteristicTooSmall(f"{field.p} divides lambda = {lam}; choose another prime")
    return value


@dataclass
class KernelSquareReport:
    a: int
    e: int
    samples_used: int
    best_rank: int
    max_possible: int
    witness: GradedPolynomial
    kernel_dim: int
    squares_checked: int
    squares_zero: bool
    rank_trace: list = field(repr=False, default_factory=list)

    @property
    def vacuous(self) -> bool:
        return self.kernel_dim == 0

    @property
    def reached_max(self) -> bool:
        return self.best_rank == self.max_possible

    def to_json(self) -> dict:
        return {
            "a": self.a, "e": self.e, "samples_used": self.samples_used,
            "best_rank": self.best_rank, "max_possible": self.max_possible,
            "reached_max": self.reached_max, "witness": self.witness.to_text(),
            "kernel_dim": self.kernel_dim, "vacuous": self.vacuous,
            "squares_checked": self.squares_checked, "squares_zero": self.squares_zero,
        }


def max_rank_kernel_square_check(ring: JacobianRing, a: int, e: int, samples: int, rng,
                                 escalate_to: int = 100, combos: int = 5) -> KernelSquareReport:
    """Find ``eta`` in ``R^a`` of maximal sampled rank on ``R^e`` and square its kernel.

    Every kernel basis vector ``alpha`` and ``combos`` random kernel
    combinations must satisfy ``alpha^2 = 0`` in ``R^{2e}``.  If ``samples``
    draws do not reach ``min(r_e, r_{e+a})`` the search continues up to
    ``escalate_to`` draws.  Draws are consumed from ``rng`` in order, so a
    larger budget never lowers the best rank.
    """
    ring.require_smooth()
    if a < 0 or e < 0 or a + 2 * e > ring.N:
        raise DegreeOutOfRange(f"need a + 2e <= N = {ring.N}")
    fld = ring.field
    target = min(ring.dim(e), ring.dim(e + a))
    best = None
    trace = []
    used = 0
    budget = samples
    while True:
        while used < budget:
            eta = ring.random_element(a, rng)
            used += 1
            r = multiplication_matrix(ring, eta, e).rank()
            if best is None or r > best[0]:
                best = (r, eta)
            trace.append(best[0])
            if best[0] == target:
                break
        if best[0] == target or budget >= max(escalate_to, samples):
            break
        budget = max(escalate_to, samples)
    rank, eta = best
    report = multiplication_operator(ring, eta, e)
    if report.rank != rank:
        raise InvariantBreach("rank changed between sampling and kernel computation")
    kernel = [ring.lift(e, v) for v in report.kernel]
    tests = list(kernel)
    for _ in range(combos if kernel else 0):
        acc = GradedPolynomial.zero(ring.n, e, fld)
        for v in kernel:
            acc = acc + v.scale(int(rng.integers(0, fld.p)))
        tests.append(acc)
    ok = all(ring.in_ideal(v * v) for v in tests)
    return KernelSquareReport(a, e, used, rank, target, eta, len(kernel), len(tests), ok, trace)
