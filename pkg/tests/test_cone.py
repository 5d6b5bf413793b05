import numpy as np
import pytest
from hypothesis import given, strategies as st

from nullbundle import minkowski as mk
from nullbundle.cone import (ConePoint, cone_embed, cone_project, homothety, transition,
                             transition_geometric, WEIGHT_BASE, WEIGHT_FIBRE)
from nullbundle.errors import NonPositiveScale, NotNull, ZeroSpatialPart, ZeroVector

from .strategies import cone_points, lorentz, positive


@pytest.mark.parametrize("c, expected", [
    (ConePoint(1, [1, 0, 0]), [1, 1, 0, 0]),
    (ConePoint(1, [3, 4, 0]), [5, 3, 4, 0]),
    (ConePoint(-1, [0, 0, 2]), [-2, 0, 0, 2]),
])
def test_embed_examples(c, expected):
    assert np.array_equal(cone_embed(c), expected)


@pytest.mark.parametrize("v, sigma, spatial", [
    ([5, 3, 4, 0], 1, [3, 4, 0]),
    ([-1, 1, 0, 0], -1, [1, 0, 0]),
    ([1, 0.6, 0.8, 0], 1, [0.6, 0.8, 0]),
])
def test_project_examples(v, sigma, spatial):
    c = cone_project(v)
    assert c.sigma == sigma
    assert np.array_equal(c.v, spatial)


def test_zero_spatial_rejected():
    with pytest.raises(ZeroSpatialPart):
        ConePoint(1, [0, 0, 0])
    with pytest.raises(ZeroSpatialPart):
        cone_embed(ConePoint(1, [1e-20, 0, 0]), tol=1e-12)


def test_project_rejects_non_null():
    with pytest.raises(NotNull):
        cone_project([2, 1, 0, 0])
    with pytest.raises(ZeroVector):
        cone_project([0, 0, 0, 0])


@given(cone_points())
def test_embed_is_null_with_matching_orientation(c):
    v = cone_embed(c)
    assert abs(mk.eta_inner(v, v)) <= 1e-12 * c.norm**2
    assert mk.orientation(v).sign == c.sigma


@given(cone_points())
def test_chart_roundtrips(c):
    assert cone_project(cone_embed(c)).isclose(c, 1e-12)
    v = cone_embed(c)
    assert np.max(np.abs(cone_embed(cone_project(v)) - v)) <= 1e-12 * np.abs(v).max()


def test_homothety_examples():
    c = ConePoint(1, [3, 4, 0])
    assert homothety(1.0, c) == c
    assert homothety(2.0, c) == ConePoint(1, [6, 8, 0])
    for lam in (0.0, -1.0):
        with pytest.raises(NonPositiveScale):
            homothety(lam, c)


def test_weights():
    assert (WEIGHT_BASE, WEIGHT_FIBRE) == (0, 1)


@given(cone_points(), st.integers(-20, 20), st.integers(-20, 20))
def test_homothety_group_law_exact_for_dyadic_scales(c, i, j):
    lam, mu = 2.0**i, 2.0**j
    assert homothety(lam, homothety(mu, c)) == homothety(lam * mu, c)


@given(cone_points(), positive, positive)
def test_homothety_group_law(c, lam, mu):
    a, b = homothety(lam, homothety(mu, c)), homothety(lam * mu, c)
    assert a.sigma == b.sigma
    assert np.max(np.abs(a.v - b.v)) <= 4.5e-16 * np.abs(b.v).max()
    assert homothety(lam, c).sigma == c.sigma


def test_transition_identity():
    c = ConePoint(-1, [0.3, -2, 1])
    assert transition(mk.LorentzTransform.identity(), c) == c


@pytest.mark.parametrize("phi", [0.4, -1.5])
def test_transition_boost_example(phi):
    out = transition(mk.boost([1, 0, 0], phi), ConePoint(1, [1, 0, 0]))
    assert out.sigma == 1
    assert np.allclose(out.v, [np.exp(-phi), 0, 0], rtol=1e-14, atol=1e-15)


@given(lorentz, cone_points())
def test_transition_formula_matches_geometric_route(L, c):
    a, b = transition(L, c), transition_geometric(L, c)
    assert a.sigma == b.sigma == c.sigma
    assert np.max(np.abs(a.v - b.v)) <= 1e-12 * max(1.0, np.abs(a.v).max())


@given(lorentz, cone_points(), positive)
def test_transition_commutes_with_homothety(L, c, lam):
    a = transition(L, homothety(lam, c)).v
    b = homothety(lam, transition(L, c)).v
    assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, np.abs(a).max())


@given(lorentz, lorentz, cone_points())
def test_transitions_compose(L1, L2, c):
    a = transition(L2, transition(L1, c)).v
    b = transition(L2 @ L1, c).v
    assert np.max(np.abs(a - b)) <= 1e-10 * max(1.0, np.abs(a).max())
