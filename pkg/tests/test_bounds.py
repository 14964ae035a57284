import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from mixed_moore.bounds import (
    bipartite_bound_1z3,
    closed_form_params,
    improved_bound,
    moore_bound,
    moore_bound_closed,
    moore_plan,
)
from mixed_moore.exceptions import MoorePreconditionError, MooreValidationError


@pytest.mark.parametrize(
    "r, z, k, expected",
    [
        (1, 1, 3, 11),
        (1, 2, 3, 34),
        (1, 6, 3, 386),
        (4, 1, 2, 27),
        (20, 2, 2, 487),
        (1, 1, 2, 6),
        (1, 2, 2, 12),
        (7, 0, 2, 50),
        (3, 0, 2, 10),
        (0, 3, 2, 13),
    ],
)
def test_moore_bound_values(r, z, k, expected):
    """Test the recurrence against known bounds."""
    assert moore_bound(r, z, k) == expected


def test_moore_plan_layers():
    """Test the layer counts of the (2, 1, 3) Moore tree."""
    plan = moore_plan(2, 1, 3)
    assert plan.layers == ((2, 1), (4, 3), (10, 7))
    assert plan.moore_bound == 28
    assert plan.almost_moore_order == 27


def test_moore_bound_rejects_bad_parameters():
    """Test parameter validation."""
    with pytest.raises(MooreValidationError):
        moore_bound(0, 0, 2)
    with pytest.raises(MooreValidationError):
        moore_bound(1, 1, 0)
    with pytest.raises(MooreValidationError):
        moore_bound(-1, 2, 2)
    with pytest.raises(MooreValidationError):
        moore_bound(1.5, 2, 2)


def test_closed_form_agrees_with_recurrence():
    """Test the closed form within 1e-6 relative for r, z in 1..10 and k in 1..8."""
    for r in range(1, 11):
        for z in range(1, 11):
            for k in range(1, 9):
                exact = moore_bound(r, z, k)
                assert moore_bound_closed(r, z, k) == pytest.approx(exact, rel=1e-6)


def test_closed_form_degenerate_cases():
    """Test that degenerate (r, z) are reported, not evaluated."""
    with pytest.raises(MoorePreconditionError):
        moore_bound_closed(1, 0, 3)
    with pytest.raises(MoorePreconditionError):
        moore_bound_closed(2, 0, 3)
    params = closed_form_params(1, 1)
    assert params.v == 5
    assert params.A + params.B == pytest.approx(1)


def test_improved_bound():
    """Test N <= M(r, z, k) - r for k >= 3."""
    assert improved_bound(1, 1, 3) == 10
    assert improved_bound(2, 1, 3) == 26
    with pytest.raises(MoorePreconditionError):
        improved_bound(1, 1, 2)


def test_bipartite_bound():
    """Test 2 (z + 1)^2."""
    assert bipartite_bound_1z3(2) == 18
    assert bipartite_bound_1z3(1) == 8


@given(st.integers(0, 6), st.integers(0, 6), st.integers(1, 6))
def test_moore_bound_grows_with_diameter(r, z, k):
    """Property: the bound counts 1 + r + z at k = 1 and strictly grows with k once r + z >= 2."""
    if r + z < 2:
        return
    assert moore_bound(r, z, 1) == 1 + r + z
    assert moore_bound(r, z, k + 1) > moore_bound(r, z, k)


@given(st.integers(1, 12), st.integers(1, 8))
def test_undirected_moore_bound(r, k):
    """Property: with z = 0 the bound is 1 + r * sum of (r - 1)^i for i < k."""
    assert moore_bound(r, 0, k) == 1 + r * sum((r - 1) ** i for i in range(k))


@given(st.integers(1, 12), st.integers(1, 8))
def test_directed_moore_bound(z, k):
    """Property: with r = 0 the bound is the sum of z^i for i <= k."""
    assert moore_bound(0, z, k) == sum(z ** i for i in range(k + 1))


@given(st.integers(0, 8), st.integers(0, 8), st.integers(1, 6))
def test_moore_bound_grows_with_each_degree(r, z, k):
    """Property: one more edge or arc per vertex strictly raises the bound."""
    assume(r + z >= 1)
    assert moore_bound(r + 1, z, k) > moore_bound(r, z, k)
    assert moore_bound(r, z + 1, k) > moore_bound(r, z, k)
