"""Variation functions of plane curves on the Jacobian-ring model.

For a smooth plane curve ``X = {F = 0}`` of degree ``d`` we use the standard
identifications

    H^0(omega_X)          <->  R^{d-3}
    H^1(O_X)              <->  R^{2d-3}
    image of Kodaira-Spencer in H^1(T_X)  <->  R^d

under which the cup product with a first-order deformation ``xi`` is ring
multiplication ``R^{d-3} -> R^{2d-3}``.  ``d_M`` is the maximal rank of that map
over ``xi`` in ``R^d``; the curve has I-maximal variation when the rank
reaches ``g = r_{d-3}``.

Random searches only ever certify lower bounds on a maximal rank (a rank
observed mod ``p`` for an integer ``xi`` is a lower bound for its rank over
``QQ``), and upper bounds on a minimal one.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .errors import DegreeOutOfRange, PreconditionError, SingularRingError
from .fields import DEFAULT_PRIMES, QQ, FieldSpec
from .poly import GradedPolynomial, fermat, hyperplane_sum, random_form, random_sparse_form
from .ring import JacobianRing, build_jacobian_ring, multiplication_matrix
from .seeding import stream

CORRESPONDENCE = {
    "H0(omega_X)": "R^{d-3}",
    "H1(O_X)": "R^{2d-3}",
    "Img(KS) in H1(T_X)": "R^d",
    "cup product": "multiplication R^d x R^{d-3} -> R^{2d-3}",
}

# integer coefficient range for sampled deformations; reduced mod every prime
XI_BOUND = 2**31


class PlaneCurveIVHS:
    """A smooth plane curve together with its Jacobian rings mod several primes.

    ``equation`` should have integer (or rational) coefficients when more than
    one prime is used; an equation already over ``F_p`` pins ``primes = [p]``.
    """

    def __init__(self, equation: GradedPolynomial, primes: Sequence[int] = DEFAULT_PRIMES):
        if equation.n != 2:
            raise PreconditionError("plane curves need exactly three variables")
        if equation.degree < 3:
            raise PreconditionError("need d >= 3")
        if not equation.field.is_rational:
            primes = [equation.field.p]
        self.equation = equation
        self.primes = tuple(primes)
        self.d = equation.degree
        self.g = (self.d - 1) * (self.d - 2) // 2
        for p in self.primes:
            r = self.ring(p)
            if not r.smooth:
                raise SingularRingError(f"curve is singular mod {p}")
            if r.dim(self.d - 3) != self.g or r.dim(2 * self.d - 3) != self.g:
                raise PreconditionError("graded pieces do not match the genus")

    @classmethod
    def fermat(cls, d: int, primes: Sequence[int] = DEFAULT_PRIMES) -> "PlaneCurveIVHS":
        return cls(fermat(2, d), primes)

    def ring(self, p: Optional[int] = None) -> JacobianRing:
        p = self.primes[0] if p is None else p
        return build_jacobian_ring(self.equation, FieldSpec(p))

    def __repr__(self) -> str:
        return f"PlaneCurveIVHS(d={self.d}, g={self.g}, primes={self.primes})"


def cup_product_rank(ivhs: PlaneCurveIVHS, xi: GradedPolynomial, p: Optional[int] = None) -> int:
    """Rank of ``xi: R^{d-3} -> R^{2d-3}`` mod ``p`` (default: the first prime)."""
    if xi.degree != ivhs.d:
        raise DegreeOutOfRange(f"deformations have degree {ivhs.d}, got {xi.degree}")
    ring = ivhs.ring(p)
    return multiplication_matrix(ring, xi.change_field(ring.field), ivhs.d - 3).rank()


def _ranks_over_primes(ivhs: PlaneCurveIVHS, xi: GradedPolynomial) -> Dict[int, int]:
    return {p: cup_product_rank(ivhs, xi, p) for p in ivhs.primes}


def _sample_xi(ivhs: PlaneCurveIVHS, seed: int, index: int) -> GradedPolynomial:
    return random_form(2, ivhs.d, QQ if ivhs.equation.field.is_rational else ivhs.equation.field,
                       stream(seed, "xi", index), bound=XI_BOUND)


@dataclass
class VariationReport:
    samples: int
    primes: tuple
    histogram: Dict[int, int]
    best_rank: int
    witness: Optional[GradedPolynomial]
    witness_ranks: Dict[int, int] = field(default_factory=dict)
    g: int = 0

    @property
    def reaches_genus(self) -> bool:
        return self.best_rank == self.g

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "primes": list(self.primes),
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "best_rank": self.best_rank,
            "genus": self.g,
            "reaches_genus": self.reaches_genus,
            "witness": self.witness.to_text() if self.witness is not None else None,
            "witness_ranks": {str(p): r for p, r in self.witness_ranks.items()},
        }


def _map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def estimate_dM(ivhs: PlaneCurveIVHS, samples: int, seed: int = 0, workers: int = 1) -> VariationReport:
    """Best cup-product rank over ``samples`` random deformations ``xi``.

    Sample ``i`` draws from its own stream ``(seed, i)`` and is ranked at every
    prime; its rank is the maximum over primes.  The best rank is a certified
    lower bound for ``d_M``.
    """
    if samples < 1:
        raise PreconditionError("need at least one sample")

    def one(i):
        xi = _sample_xi(ivhs, seed, i)
        ranks = _ranks_over_primes(ivhs, xi)
        return xi, ranks

    results = _map(one, range(samples), workers)
    hist = Counter(max(r.values()) for _, r in results)
    best_i = max(range(samples), key=lambda i: (max(results[i][1].values()), -i))
    xi, ranks = results[best_i]
    return VariationReport(samples, ivhs.primes, dict(hist), max(ranks.values()), xi, ranks, ivhs.g)


@dataclass
class MaximalVariationReport:
    found: bool
    witness: Optional[GradedPolynomial]
    witness_ranks: Dict[int, int]
    samples_used: int
    g: int

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "witness": self.witness.to_text() if self.witness is not None else None,
            "witness_ranks": {str(p): r for p, r in self.witness_ranks.items()},
            "samples_used": self.samples_used,
            "genus": self.g,
        }


def verify_I_maximal(ivhs: PlaneCurveIVHS, samples: int = 20, seed: int = 0, escalate_to: int = 100) -> MaximalVariationReport:
    """Search for ``xi`` whose cup product ``R^{d-3} -> R^{2d-3}`` has rank ``g``.

    ``(x0 + x1 + x2)^d`` is tried first, then random draws; the budget
    escalates from ``samples`` to ``escalate_to``.  A witness must reach rank
    ``g`` at every prime.  A miss is reported as not found, never as a proof
    that no witness exists.
    """
    fld = ivhs.equation.field
    candidates = [hyperplane_sum(2, fld) ** ivhs.d]
    used = 0
    budget = max(samples, escalate_to)
    i = 0
    while True:
        if candidates:
            xi = candidates.pop()
        elif used < budget:
            xi = _sample_xi(ivhs, seed, i)
            i += 1
        else:
            return MaximalVariationReport(False, None, {}, used, ivhs.g)
        used += 1
        ranks = _ranks_over_primes(ivhs, xi)
        if all(r == ivhs.g for r in ranks.values()):
            return MaximalVariationReport(True, xi, ranks, used, ivhs.g)


def fermat_min_variation_witness(d: int, field: FieldSpec = QQ):
    """``(x^{d-2} y^2, rank)`` on the Fermat curve; the rank is ``d - 3``."""
    if d < 5:
        raise PreconditionError("need d >= 5")
    ring = build_jacobian_ring(fermat(2, d, field), field)
    xi = GradedPolynomial.monomial((d - 2, 2, 0), 1, field)
    r = multiplication_matrix(ring, xi, d - 3).rank()
    return xi, r


@dataclass
class SpectrumReport:
    samples: int
    histogram: Dict[int, int]
    lower_bound: int  # d - 3
    counterexamples: List[GradedPolynomial]
    min_rank: int

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "expected_lower_bound": self.lower_bound,
            "observed_min": self.min_rank,
            "counterexamples": [x.to_text() for x in self.counterexamples],
        }


def rank_spectrum(ivhs: PlaneCurveIVHS, samples: int, seed: int = 0, extra: Sequence[GradedPolynomial] = (),
                  max_terms: int = 4, workers: int = 1) -> SpectrumReport:
    """Histogram of cup-product ranks over nonzero ``xi mod J``.

    Dense random ``xi`` almost always have maximal rank, so draws are sparse:
    1 to ``max_terms`` random monomials with random coefficients.  Elements of
    ``J^d`` are redrawn.  Ranks strictly between 0 and ``d - 3`` are collected
    as counterexamples.
    """
    d = ivhs.d
    if d < 5:
        raise PreconditionError("need d >= 5")
    ring = ivhs.ring()
    fld = ring.field

    def one(i):
        rng = stream(seed, "spectrum", i)
        while True:
            terms = int(rng.integers(1, max_terms + 1))
            xi = random_sparse_form(2, d, fld, rng, terms, fld.p)
            if not ring.in_ideal(xi):
                return xi, cup_product_rank(ivhs, xi)

    drawn = _map(one, range(samples), workers)
    drawn += [(x, cup_product_rank(ivhs, x)) for x in extra if not ring.in_ideal(x.change_field(fld))]
    hist = Counter(r for _, r in drawn)
    bad = [x for x, r in drawn if 0 < r < d - 3]
    return SpectrumReport(len(drawn), dict(hist), d - 3, bad, min(hist) if hist else 0)


def yukawa_rank(ring: JacobianRing, xi: GradedPolynomial) -> int:
    """Rank of ``xi^{n-1}: R^{d-n-1} -> R^{dn-n-1}``.

    A linear form ``L`` is accepted as shorthand for the deformation ``L^d``.
    """
    ring.require_smooth()
    if ring.F is None:
        raise PreconditionError("Yukawa coupling needs a hypersurface ring")
    n, d = ring.n, ring.F.degree
    if xi.degree == 1:
        xi = ring.power(xi, d)
    if xi.degree != d:
        raise DegreeOutOfRange(f"deformations have degree {d}, got {xi.degree}")
    if d < n + 1:
        raise PreconditionError("need d >= n + 1")
    power = ring.power(xi, n - 1)
    return multiplication_matrix(ring, power, d - n - 1).rank()
