import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nullbundle import bundle as bd
from nullbundle import heap as h
from nullbundle import minkowski as mk
from nullbundle.cone import ConePoint, cone_embed
from nullbundle.errors import MixedOrientation, ProportionalSections, ZeroDivisor
from nullbundle.spacetime import SamplingSet

from .strategies import cone_points, seeds


def const(st_, sigma, v):
    return h.NullSection.constant(st_, ConePoint(sigma, v))


@pytest.fixture
def flat_s(flat):
    return bd.default_sampling(flat)


# -- pairing and definedness -------------------------------------------------

def test_g_pair_self_is_zero(spacetime, sampling):
    u = h.random_section(spacetime, 1)
    assert np.max(np.abs(h.g_pair(u, u, sampling))) <= 1e-12 * np.max(u.vectors(sampling) ** 2)


def test_g_pair_constant_example(flat, flat_s):
    u, v = const(flat, 1, [1, 0, 0]), const(flat, 1, [0, 1, 0])
    assert np.array_equal(h.g_pair(u, v, flat_s), np.full(len(flat_s), -1.0))


def test_g_pair_future_past_positive(spacetime, sampling):
    for seed in range(50):
        u = h.random_section(spacetime, seed, sigma=1)
        v = h.random_section(spacetime, seed + 1000, sigma=-1)
        if not h.definedness(u, v, sampling):
            continue
        assert np.all(h.g_pair(u, v, sampling) > 0)


def test_definedness_examples(flat, flat_s):
    v = h.random_section(flat, 3)
    assert not h.definedness(v, v.scaled(2.0), flat_s)
    assert h.definedness(const(flat, 1, [1, 0, 0]), const(flat, 1, [0, 1, 0]), flat_s)
    # the anti-parallel null partner of v is -v: opposite sigma, spatial part negated
    assert not h.definedness(v, v.negated(), flat_s)


def test_opposite_sigma_same_spatial_is_defined(flat, flat_s):
    # (1, e) and (-1, e) pair to 2|e|^2, so they are not proportional
    v = const(flat, 1, [1, 0, 0])
    w = const(flat, -1, [1, 0, 0])
    assert np.array_equal(h.g_pair(v, w, flat_s), np.full(len(flat_s), 2.0))
    assert h.definedness(v, w, flat_s)


def test_pairing_sign_lemma_brute_force():
    """eta(a, b) = 0 for embedded cone points exactly when b = k a with k != 0."""
    dirs = []
    for th in np.linspace(0.1, np.pi - 0.1, 7):
        for ph in np.linspace(-np.pi, np.pi, 12, endpoint=False):
            dirs.append([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
    dirs += [[0, 0, 1], [0, 0, -1]]
    dirs = np.array(dirs)
    for (i, a), (j, b) in itertools.product(enumerate(dirs), repeat=2):
        for sa, sb in itertools.product((1, -1), repeat=2):
            for scale in (0.5, 3.0):
                ea = cone_embed(ConePoint(sa, a))
                eb = cone_embed(ConePoint(sb, scale * b))
                pair = mk.eta_inner(ea, eb)
                parallel = np.allclose(b, a, atol=1e-12) and sa == sb
                antiparallel = np.allclose(b, -a, atol=1e-12) and sa == -sb
                zero = abs(pair) <= 1e-12 * scale
                assert zero == (parallel or antiparallel), (a, b, sa, sb)
                if not zero:
                    # sign is fixed by the half-cones: same half negative, opposite positive
                    assert np.sign(pair) == -sa * sb


# -- ternary -----------------------------------------------------------------

def test_ternary_constant_example(flat, flat_s):
    u, v, w = const(flat, 1, [1, 0, 0]), const(flat, 1, [0, 1, 0]), const(flat, 1, [0, 0, 1])
    out = h.ternary(u, v, w, flat_s)
    # u * g(v, w) = -(1, 1, 0, 0): past half-cone, spatial part (-1, 0, 0)
    assert out.sigma == -1
    assert np.array_equal(out.spatial_on(flat_s), np.tile([-1.0, 0, 0], (len(flat_s), 1)))
    assert np.array_equal(out.vectors(flat_s), np.tile([-1.0, -1, 0, 0], (len(flat_s), 1)))
    # the cached result agrees with a fresh evaluation on another sampling
    other = SamplingSet(flat.chart, flat_s.coords[:3].copy())
    assert np.array_equal(out.spatial_on(other), np.tile([-1.0, 0, 0], (3, 1)))


def test_ternary_self_proportional(spacetime, sampling):
    u, v = h.random_sections(spacetime, 5, 2)
    with pytest.raises(ProportionalSections):
        h.ternary(u, v, v, sampling)
    with pytest.raises(ProportionalSections):
        h.ternary(u, v, v.scaled(3.0), sampling)


def test_ternary_scaling(spacetime, sampling):
    for seed in range(30):
        u, v, w = h.random_sections(spacetime, seed, 3)
        if not h.definedness(v, w, sampling):
            continue
        f = h.random_positive_field(seed)
        lhs = h.ternary(h.scale_section(f, u, sampling), v, w, sampling).vectors(sampling)
        rhs = f.on(sampling)[:, None] * h.ternary(u, v, w, sampling).vectors(sampling)
        assert h._residual(lhs, rhs) <= 1e-12


def test_ternary_sigma_rule(spacetime, sampling):
    for seed in range(40):
        u, v, w = h.random_sections(spacetime, seed, 3)
        if not h.definedness(v, w, sampling):
            continue
        out = h.ternary(u, v, w, sampling)
        assert out.sigma == u.sigma * np.sign(h.g_pair(v, w, sampling)[0])
        assert out.sigma == u.sigma * (-v.sigma * w.sigma)


def test_ternary_closure(spacetime, sampling):
    for seed in range(40):
        u, v, w = h.random_sections(spacetime, seed, 3)
        if not h.definedness(v, w, sampling):
            continue
        out = h.ternary(u, v, w, sampling)
        vec = out.vectors(sampling)
        assert np.all(np.abs(mk.eta_inner(vec, vec)) <= 1e-12 * np.einsum("ni,ni->n", vec, vec))
        # fresh (uncached) evaluation agrees with the seeded cache
        fresh = np.asarray(out.spatial(sampling.coords))
        assert h._residual(fresh, out.spatial_on(sampling)) <= 1e-14


def test_constant_sign_errors():
    with pytest.raises(ZeroDivisor):
        h._constant_sign(np.array([1.0, 0.0, 2.0]), "x")
    with pytest.raises(MixedOrientation):
        h._constant_sign(np.array([1.0, -1.0]), "x")
    assert h._constant_sign(np.array([-1.0, -3.0]), "x") == -1


def test_scale_section_rejects_sign_change(flat, flat_s):
    u = h.random_section(flat, 0)
    f = h.InvertibleScalarField(lambda x: np.asarray(x)[..., 0] + 0.05)
    with pytest.raises(MixedOrientation):
        h.scale_section(f, u, flat_s)


def test_scale_section_negative_constant_flips(flat, flat_s):
    u = h.random_section(flat, 0)
    out = h.scale_section(h.InvertibleScalarField.constant(-2.0), u, flat_s)
    assert out.sigma == -u.sigma
    assert np.allclose(out.vectors(flat_s), -2 * u.vectors(flat_s), rtol=1e-15)


# -- para-associativity ------------------------------------------------------

def test_para_associativity_small(spacetime, sampling):
    secs = h.random_sections(spacetime, 77, 5 * 200, prefetch=sampling)
    worst = 0.0
    for i in range(200):
        u = secs[5 * i: 5 * i + 5]
        try:
            res = h.para_associativity_residuals(*u, sampling)
        except ProportionalSections:
            continue
        worst = max(worst, *res.values())
    assert worst <= 1e-10


@given(cone_points(), cone_points(), cone_points(), cone_points(), cone_points())
def test_fibrewise_para_associativity(c1, c2, c3, c4, c5):
    s = bd.schwarzschild()
    one = SamplingSet(s.chart, np.array([[0.0, 3.0, 1.0, 0.5]]))
    u = [h.NullSection.constant(s, c) for c in (c1, c2, c3, c4, c5)]
    try:
        res = h.para_associativity_residuals(*u, one)
    except ProportionalSections:
        return
    assert max(res.values()) <= 1e-10


# -- fixed binary product ----------------------------------------------------

def test_binary_fixed_associative_constants(flat, flat_s):
    w = const(flat, 1, [0, 0, 1])
    a, b, c = const(flat, 1, [1, 0, 0]), const(flat, -1, [0, 1, 0]), const(flat, 1, [1, 1, 0])
    left = h.binary_fixed(w, h.binary_fixed(w, a, b, flat_s), c, flat_s)
    right = h.binary_fixed(w, a, h.binary_fixed(w, b, c, flat_s), flat_s)
    closed = a.vectors(flat_s) * (h.g_pair(w, b, flat_s) * h.g_pair(w, c, flat_s))[:, None]
    assert np.max(np.abs(left.vectors(flat_s) - right.vectors(flat_s))) <= 1e-12
    assert np.max(np.abs(left.vectors(flat_s) - closed)) <= 1e-12


def test_binary_fixed_proportional(flat, flat_s):
    w = h.random_section(flat, 9)
    with pytest.raises(ProportionalSections):
        h.binary_fixed(w, h.random_section(flat, 1), w.scaled(0.5), flat_s)


def test_pp_wave_constant_null_field(flat, flat_s):
    # a constant null field w (pp-wave style): defined for every pair not along w
    w = const(flat, 1, [0, 0, 1])
    rng = np.random.default_rng(4)
    for _ in range(200):
        c = ConePoint(int(rng.choice([1, -1])), rng.normal(size=3))
        u2 = h.NullSection.constant(flat, c)
        u1 = h.random_section(flat, int(rng.integers(1 << 30)))
        out = h.binary_fixed(w, u1, u2, flat_s)
        assert np.allclose(out.vectors(flat_s), h.ternary(u1, w, u2, flat_s).vectors(flat_s))


# -- total ternary on vector fields ------------------------------------------

def test_full_ternary_zero(schw):
    s = bd.default_sampling(schw)
    x = h.VectorField(schw, lambda c: np.asarray(c) * 0.3 + 1.0)
    zero = h.VectorField.constant(schw, [0, 0, 0, 0])
    assert np.array_equal(h.full_ternary(x, x, zero).on(s), np.zeros((len(s), 4)))


def test_full_ternary_tau(flat, flat_s):
    tau = h.VectorField.time_orientation(flat)
    out = h.full_ternary(tau, tau, tau).on(flat_s)
    assert np.array_equal(out, np.tile([-1.0, 0, 0, 0], (len(flat_s), 1)))


def _field(st_, rng):
    a, b = rng.normal(size=(2, 4))
    k = rng.normal(scale=0.3, size=(4, 4))
    return h.VectorField(st_, lambda c: a + b * np.cos(np.asarray(c) @ k))


def test_full_para_associativity_without_definedness(spacetime, sampling):
    rng = np.random.default_rng(12)
    for _ in range(100):
        xs = [_field(spacetime, rng) for _ in range(5)]
        # duplicate arguments, which the partial product would refuse
        xs[2] = xs[1]
        res = h.full_para_associativity_residuals(*xs, sampling)
        assert max(res.values()) <= 1e-10


def test_tau_product_associative(spacetime, sampling):
    rng = np.random.default_rng(13)
    for _ in range(100):
        a, b, c = (_field(spacetime, rng) for _ in range(3))
        left = h.tau_product(h.tau_product(a, b), c).on(sampling)
        right = h.tau_product(a, h.tau_product(b, c)).on(sampling)
        assert np.max(np.abs(left - right)) <= 1e-12 * max(1.0, np.abs(left).max())


def test_from_section_matches_coordinate_vectors(spacetime, sampling):
    u = h.random_section(spacetime, 2)
    assert np.allclose(h.VectorField.from_section(u).on(sampling), u.coordinate_vectors(sampling),
                       rtol=1e-14, atol=1e-14)


# -- heap on invertible fields -----------------------------------------------

def test_heap_constant_example(flat_s):
    c = h.InvertibleScalarField.constant
    assert np.array_equal(h.heap_ternary(c(2), c(4), c(6), flat_s).on(flat_s), np.full(len(flat_s), 3.0))


@given(seeds, seeds)
def test_heap_biunitarity(s1, s2):
    s = bd.default_sampling(bd.get_spacetime("minkowski"))
    f, g = h.random_positive_field(s1), h.random_positive_field(s2)
    gv = g.on(s)
    assert np.max(np.abs(h.heap_ternary(f, f, g, s).on(s) - gv)) <= 1e-14 * np.abs(gv).max()
    assert np.max(np.abs(h.heap_ternary(g, f, f, s).on(s) - gv)) <= 1e-14 * np.abs(gv).max()


@given(seeds)
def test_heap_para_associativity(seed):
    s = bd.default_sampling(bd.get_spacetime("minkowski"))
    f = [h.random_positive_field([seed, i]) for i in range(5)]
    a = h.heap_ternary(h.heap_ternary(f[0], f[1], f[2]), f[3], f[4]).on(s)
    b = h.heap_ternary(f[0], h.heap_ternary(f[3], f[2], f[1]), f[4]).on(s)
    c = h.heap_ternary(f[0], f[1], h.heap_ternary(f[2], f[3], f[4])).on(s)
    assert h._residual(a, b) <= 1e-14 and h._residual(b, c) <= 1e-14


def test_heap_inverse(flat_s):
    f = [h.random_positive_field(i) for i in range(3)]
    prod = h.heap_ternary(*f).on(flat_s) * h.heap_inverse(*f).on(flat_s)
    assert np.max(np.abs(prod - 1)) <= 1e-15


def test_heap_zero_divisor(flat_s):
    zero = h.InvertibleScalarField(lambda x: np.zeros(np.shape(x)[:-1]))
    one = h.InvertibleScalarField.constant(1.0)
    with pytest.raises(ZeroDivisor):
        h.heap_ternary(one, zero, one, flat_s)


# -- distribution rules ------------------------------------------------------

def _defined_triple(st_, seed, sampling):
    i = 0
    while True:
        u, v, w = h.random_sections(st_, [seed, i], 3)
        if h.definedness(v, w, sampling):
            return u, v, w
        i += 1


def test_module_distribution_examples(flat, flat_s):
    u, v, w = const(flat, 1, [1, 0, 0]), const(flat, 1, [0, 1, 0]), const(flat, -1, [0, 0, 1])
    assert h.module_distribution_check(h.InvertibleScalarField.constant(1.0), u, v, w, flat_s) == 0.0
    assert h.module_distribution_check(h.InvertibleScalarField.constant(2.0), u, v, w, flat_s) <= 1e-12


def test_module_distribution_random(spacetime, sampling):
    for seed in range(100):
        u, v, w = _defined_triple(spacetime, seed, sampling)
        assert h.module_distribution_check(h.random_positive_field(seed), u, v, w, sampling) <= 1e-10


def test_module_distribution_proportional(flat, flat_s):
    u, v = h.random_sections(flat, 1, 2)
    with pytest.raises(ProportionalSections):
        h.module_distribution_check(h.InvertibleScalarField.constant(2.0), u, v, v, flat_s)


def test_heap_semiheap_reduces_to_module(spacetime, sampling):
    u, v, w = _defined_triple(spacetime, 3, sampling)
    f = h.random_positive_field(3)
    a = h.heap_semiheap_distribution_check(f, f, f, u, v, w, sampling)
    b = h.module_distribution_check(f, u, v, w, sampling)
    assert a <= 1e-12 and b <= 1e-12


def test_heap_semiheap_constants(flat, flat_s):
    c = h.InvertibleScalarField.constant
    u, v, w = const(flat, 1, [1, 0, 0]), const(flat, 1, [0, 1, 0]), const(flat, 1, [0, 0, 1])
    assert h.heap_semiheap_distribution_check(c(2), c(1), c(3), u, v, w, flat_s) <= 1e-12


def test_heap_semiheap_random(spacetime, sampling):
    for seed in range(100):
        u, v, w = _defined_triple(spacetime, seed, sampling)
        f1, f2, f3 = (h.random_positive_field([seed, i]) for i in range(3))
        assert h.heap_semiheap_distribution_check(f1, f2, f3, u, v, w, sampling) <= 1e-10
