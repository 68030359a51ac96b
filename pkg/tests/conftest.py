import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from isoquintic.qpoly import Poly


@pytest.fixture
def rng():
    return random.Random(20240824)


def random_poly(rnd, vars=("x", "y", "a", "b"), max_terms=5, max_exp=3,
                coeff_range=9):
    terms = {}
    p = Poly.zero()
    for _ in range(rnd.randint(0, max_terms)):
        term = Poly.const(Fraction(rnd.randint(-coeff_range, coeff_range),
                                   rnd.randint(1, 4)))
        for v in vars:
            term = term * Poly.var(v, rnd.randint(0, max_exp))
        p = p + term
    return p


coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=4)


@st.composite
def polys(draw, vars=("x", "y", "a", "b"), max_terms=4, max_exp=3):
    p = Poly.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        term = Poly.const(draw(coeffs))
        for v in vars:
            term = term * Poly.var(v, draw(st.integers(0, max_exp)))
        p = p + term
    return p
