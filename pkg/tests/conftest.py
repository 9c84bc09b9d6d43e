import itertools

import numpy as np
import pytest

from jacring.fields import FieldSpec

P1 = FieldSpec(65537)
P2 = FieldSpec(1000003)


def fermat_standard(n, d, k):
    """Monomials of degree k with every exponent <= d - 2, by brute-force enumeration."""
    return [m for m in itertools.product(range(d - 1), repeat=n + 1) if sum(m) == k]


def fermat_reduce(m, d):
    """A monomial survives modulo (x_i^{d-1}) iff all its exponents are <= d - 2."""
    return all(e <= d - 2 for e in m)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
