from fractions import Fraction

import numpy as np
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from wedgelab import cones

ORTHANT = np.eye(2)
vec2 = arrays(float, 2, elements=st.floats(-5.0, 5.0, allow_nan=False))


def test_rational_rounding():
    assert cones.rational(0.5) == Fraction(1, 2)
    assert cones.rational(1 / 3) == Fraction(1, 3)


def test_exact_rank():
    M = cones.rational_matrix([[1, 2], [2, 4], [0, 1]])
    assert cones.exact_rank(M) == 2
    assert cones.exact_rank(cones.rational_matrix([[0, 0]])) == 0


def test_feasible_returns_witness():
    A = cones.rational_matrix([[1, 1]])
    ok, x = cones.feasible(A, [Fraction(3)])
    assert ok and sum(x) == 3 and all(v >= 0 for v in x)
    ok, x = cones.feasible(A, [Fraction(-1)])
    assert not ok and x is None


@given(vec2)
def test_orthant_membership(x):
    inside = bool(np.all(x >= -cones.CLOSED_SLACK))
    assert cones.contains_generated(ORTHANT, x) == inside
    assert cones.in_inequalities(ORTHANT, x) == inside


def test_interior_margin():
    assert cones.contains_generated(ORTHANT, [1.0, 1.0], margin=0.5)
    assert not cones.contains_generated(ORTHANT, [1.0, 0.0], margin=1e-9)
    assert cones.in_inequalities(ORTHANT, [1.0, 1.0], margin=0.5)
    assert not cones.in_inequalities(ORTHANT, [1.0, 0.0], margin=1e-9)


def test_pointed_and_spanning():
    assert cones.generated_is_pointed(ORTHANT)
    line = np.array([[1.0, -1.0], [0.0, 0.0]])
    assert not cones.generated_is_pointed(line)
    assert not cones.generated_spans(line)
    assert cones.generated_spans(ORTHANT)


def test_inequality_cone_properties():
    assert cones.inequalities_pointed(ORTHANT)
    assert cones.inequalities_have_interior(ORTHANT)
    half_plane = np.array([[1.0, 0.0]])
    assert not cones.inequalities_pointed(half_plane)
    # x >= 0 and -x >= 0 cut out a line: no interior
    assert not cones.inequalities_have_interior(np.array([[1.0, 0.0], [-1.0, 0.0]]))


def test_generators_satisfy():
    G = np.array([[1.0, 1.0], [0.0, 1.0]])
    assert cones.generators_satisfy(G, ORTHANT)
    assert not cones.generators_satisfy(np.array([[1.0], [-1.0]]), ORTHANT)


@given(arrays(float, (2, 3), elements=st.floats(0.0, 4.0, allow_nan=False)))
def test_nonnegative_combinations_are_members(c):
    G = np.array([[1.0, 2.0, 0.5], [0.0, 1.0, 3.0]])
    w = np.array([0.25, 0.5, 0.125])
    x = G @ w
    assert cones.contains_generated(G, x)
