from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacring.errors import CharacteristicTooSmall, PreconditionError
from jacring.fields import QQ, FieldSpec
from jacring.lefschetz import (
    max_rank_kernel_square_check,
    slp_check,
    socle_coefficient,
    socle_coefficient_expansion,
    star_property_check,
    wlp_check,
)
from jacring.poly import GradedPolynomial, fermat, hyperplane_sum
from jacring.ring import build_jacobian_ring, monomial_ci_ring

from conftest import P1


def test_two_by_two_complete_intersection():
    r = monomial_ci_ring((2, 2), P1)
    assert r.hilbert_function() == [1, 2, 1]
    L = hyperplane_sum(1, P1)
    assert wlp_check(r, L).wlp
    rep = slp_check(r, L)
    assert rep.slp and [(row.k, row.power, row.rank) for row in rep.rows] == [(0, 1, 1), (0, 2, 1), (1, 1, 1)]


def test_wlp_fails_for_a_coordinate():
    # on the Fermat quartic, x0 kills x0^2 in degree 2 -> 3, so the rank is 5 < 6
    r = build_jacobian_ring(fermat(2, 4, P1), P1)
    rep = wlp_check(r, GradedPolynomial.variable(0, 2, P1))
    assert not rep.wlp
    bad = {row.k: row.rank for row in rep.failures()}
    assert bad[2] == 5


def test_zero_form_fails_wlp():
    r = monomial_ci_ring((3, 3), P1)
    assert not wlp_check(r, GradedPolynomial.zero(1, 1, P1)).wlp


def test_slp_needs_large_characteristic():
    r = monomial_ci_ring((5, 5, 5), FieldSpec(11))
    with pytest.raises(CharacteristicTooSmall):
        slp_check(r, hyperplane_sum(2, FieldSpec(11)))


def test_slp_ci_333_over_q():
    assert slp_check(monomial_ci_ring((3, 3, 3), QQ), hyperplane_sum(2, QQ)).slp


def test_slp_report_is_json_ready():
    out = slp_check(monomial_ci_ring((2, 3), P1), hyperplane_sum(1, P1)).to_json()
    assert out["slp"] is True and out["wlp"] is True


@pytest.mark.parametrize("n,d,k", [(2, 3, 0), (2, 5, 2), (3, 5, 1), (4, 5, 0), (3, 6, 2), (2, 8, 5)])
def test_star_holds_inside_the_predicted_range(n, d, k):
    rep = star_property_check(n, d, k, P1)
    assert rep.holds and rep.rank == rep.source_dim
    assert rep.to_json()["lemma_predicts"]


def test_star_past_the_socle():
    rep = star_property_check(2, 3, 1, P1)
    assert not rep.holds and rep.obstruction


def test_star_cubic_is_lambda():
    # for n=2, d=3 the map is 1 -> H^3 = 6 xyz, nonzero iff p != 2, 3
    assert star_property_check(2, 3, 0, QQ).holds


@pytest.mark.parametrize("n,expected", [(2, 6), (3, 2520)])
def test_socle_coefficient(n, expected):
    d = n + 1
    N = (n + 1) * (d - 2)
    # oracle: expand H^N with the generic polynomial class and read off the sigma coefficient
    h = hyperplane_sum(n, QQ) ** N
    sigma = (d - 2,) * (n + 1)
    direct = int(h.coeffs[sigma])
    assert direct == expected == factorial((n + 1) * (n - 1)) // factorial(n - 1) ** (n + 1)
    assert socle_coefficient_expansion(n, d) == expected
    assert socle_coefficient(n, d, QQ) == expected


def test_socle_coefficient_in_the_ring():
    n, d = 2, 3
    r = build_jacobian_ring(fermat(n, d, P1), P1)
    h = r.power(hyperplane_sum(n, P1), r.N)
    assert r.normal_form(h) == (6,)


def test_socle_coefficient_vanishing_mod_p():
    with pytest.raises(CharacteristicTooSmall):
        socle_coefficient(2, 3, FieldSpec(3))
    with pytest.raises(PreconditionError):
        socle_coefficient(2, 4, QQ)


def test_kernel_square_vacuous_at_full_rank():
    r = build_jacobian_ring(fermat(2, 5, P1), P1)
    rep = max_rank_kernel_square_check(r, 3, 3, samples=5, rng=np.random.default_rng(0))
    assert rep.reached_max and rep.best_rank == 10 and rep.vacuous and rep.squares_zero


def test_kernel_square_with_kernel():
    r = build_jacobian_ring(fermat(2, 5, P1), P1)
    rep = max_rank_kernel_square_check(r, 1, 4, samples=10, rng=np.random.default_rng(1))
    assert rep.max_possible == min(r.dim(4), r.dim(5))
    assert rep.squares_zero
    assert rep.kernel_dim == r.dim(4) - rep.best_rank


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**20))
def test_kernel_square_trace_is_monotone(seed):
    r = monomial_ci_ring((2, 2, 8), P1)
    rep = max_rank_kernel_square_check(r, 2, 3, samples=5, rng=np.random.default_rng(seed))
    assert rep.rank_trace == sorted(rep.rank_trace)
    assert rep.squares_zero


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 2**16))
def test_wlp_invariant_under_scaling(c):
    r = monomial_ci_ring((3, 4, 4), P1)
    L = hyperplane_sum(2, P1)
    a = [row.rank for row in wlp_check(r, L).rows]
    b = [row.rank for row in wlp_check(r, L.scale(c)).rows]
    assert a == b
