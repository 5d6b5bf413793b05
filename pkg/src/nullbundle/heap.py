"""Ternary algebra on nowhere-vanishing null vector fields.

Sections are stored in frame (fibre) coordinates: a fixed half-cone sign
plus a map from coordinates ``(n, 4)`` to spatial components ``(n, 3)``.
Every pointwise law is checked on a finite :class:`SamplingSet`, so
"defined everywhere" always means "defined at every sampled event".

The partial product is ``[u, v, w] = u g(v, w)``; it exists only when
``v`` and ``w`` are nowhere proportional, which for null vectors is the
same as ``g(v, w)`` being nowhere zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import minkowski as mk
from .cone import ConePoint, embed
from .errors import MixedOrientation, ProportionalSections, ZeroDivisor, ZeroSpatialPart
from .spacetime import SamplingSet, Spacetime, metric_inner

DEFINEDNESS_TOL = 1e-10
_TINY = np.finfo(float).tiny


def _residual(a, b) -> float:
    """max |a - b| relative to the larger of max|a|, max|b|."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(float(np.abs(a).max()), float(np.abs(b).max()), _TINY)
    return float(np.abs(a - b).max()) / scale


@dataclass(frozen=True, eq=False)
class NullSection:
    """A nowhere-vanishing null vector field in one half of the cone."""

    spacetime: Spacetime
    sigma: int
    spatial: Callable[[np.ndarray], np.ndarray]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.sigma not in (1, -1):
            raise ValueError(f"sigma must be +1 or -1, got {self.sigma!r}")

    @classmethod
    def constant(cls, st: Spacetime, c: ConePoint) -> "NullSection":
        v = np.array(c.v)

        def spatial(x):
            return np.broadcast_to(v, np.shape(x)[:-1] + (3,))

        return cls(st, c.sigma, spatial)

    def _evaluate(self, sampling: SamplingSet):
        hit = self._cache.get("last")
        if hit is not None and hit[0] is sampling:
            return hit[1], hit[2]
        v = np.asarray(self.spatial(sampling.coords), dtype=float)
        if v.shape != (len(sampling), 3):
            v = np.broadcast_to(v, (len(sampling), 3))
        n = np.sqrt(np.einsum("ni,ni->n", v, v))
        if not ((n > 0.0) & (n < np.inf)).all():
            raise ZeroSpatialPart("section vanishes or is non-finite at a sampled event")
        vec = np.empty((len(sampling), 4))
        vec[:, 0] = self.sigma * n
        vec[:, 1:] = v
        self._seed(sampling, v, vec)
        return v, vec

    def _seed(self, sampling, v, vec):
        self._cache["last"] = (sampling, v, vec)

    def spatial_on(self, sampling: SamplingSet) -> np.ndarray:
        return self._evaluate(sampling)[0]

    def sample(self, sampling: SamplingSet):
        """``(sigma, v)`` arrays over the sampling."""
        return np.full(len(sampling), self.sigma), self.spatial_on(sampling)

    def vectors(self, sampling: SamplingSet) -> np.ndarray:
        """Frame components (n, 4)."""
        return self._evaluate(sampling)[1]

    def coordinate_vectors(self, sampling: SamplingSet) -> np.ndarray:
        e = self.spacetime.vierbein(sampling)
        return np.einsum("nmb,nb->nm", e, self.vectors(sampling))

    def at(self, p) -> ConePoint:
        return ConePoint(self.sigma, np.asarray(self.spatial(np.asarray(p.x)[None]))[0])

    def scaled(self, lam: float) -> "NullSection":
        """Pointwise homothety by a positive constant."""
        if not lam > 0:
            from .errors import NonPositiveScale
            raise NonPositiveScale(f"homothety needs lam > 0, got {lam!r}")
        return NullSection(self.spacetime, self.sigma, lambda x: lam * np.asarray(self.spatial(x)))

    def negated(self) -> "NullSection":
        """The anti-parallel field -u (opposite half-cone, spatial part negated)."""
        return NullSection(self.spacetime, -self.sigma, lambda x: -np.asarray(self.spatial(x)))


def _ripple(a, amp, k, phase):
    def spatial(x):
        return a + amp * np.sin(np.asarray(x) @ k + phase)
    return spatial


def random_sections(st: Spacetime, seed, count: int, sigma: int | None = None,
                    scale_range=(0.5, 2.0), prefetch: SamplingSet | None = None) -> list:
    """Smooth random sections: a constant spatial vector plus a bounded ripple.

    The ripple has norm at most 0.4 of the constant part, so every section
    is nowhere vanishing on the whole chart. With ``prefetch`` the sections
    are evaluated on that sampling in one vectorised pass and cached.
    """
    rng = mk._rng(seed)
    z = rng.standard_normal((count, 15))
    w = rng.random((count, 5))
    if sigma is None:
        sigmas = np.where(w[:, 0] < 0.5, 1, -1)
    else:
        sigmas = np.full(count, sigma)
    lo, hi = scale_range
    a = z[:, :3] / np.linalg.norm(z[:, :3], axis=1, keepdims=True)
    a *= (lo + (hi - lo) * w[:, 1])[:, None]
    amp = 0.4 * np.linalg.norm(a, axis=1) / np.sqrt(3.0)
    k = 0.5 * z[:, 3:].reshape(count, 4, 3)
    phase = 2 * np.pi * w[:, 2:]
    out = [NullSection(st, int(sigmas[i]), _ripple(a[i], amp[i], k[i], phase[i]))
           for i in range(count)]
    if prefetch is not None:
        x = prefetch.coords
        v = a[:, None, :] + amp[:, None, None] * np.sin(
            np.einsum("nm,cmi->cni", x, k) + phase[:, None, :])
        vec = np.concatenate([sigmas[:, None, None] * np.linalg.norm(v, axis=2, keepdims=True), v],
                             axis=2)
        for i, u in enumerate(out):
            u._seed(prefetch, v[i], vec[i])
    return out


def ripple_section(st: Spacetime, sigma: int, base, seed) -> NullSection:
    """Section whose spatial part stays within 0.4 |base| of the constant ``base``.

    Pointwise, its direction is within asin(0.4) (about 23.6 degrees) of ``base``.
    """
    rng = mk._rng(seed)
    a = np.array(base, dtype=float)
    amp = 0.4 * np.linalg.norm(a) / np.sqrt(3.0)
    k = rng.normal(scale=0.5, size=(4, 3))
    phase = rng.uniform(0, 2 * np.pi, size=3)
    return NullSection(st, sigma, _ripple(a, amp, k, phase))


def random_section(st: Spacetime, seed, sigma: int | None = None,
                   scale_range=(0.5, 2.0)) -> NullSection:
    return random_sections(st, seed, 1, sigma, scale_range)[0]


def g_pair(u: NullSection, v: NullSection, sampling: SamplingSet) -> np.ndarray:
    """g_p(u_p, v_p) at every sampled event."""
    return mk.eta_inner(u.vectors(sampling), v.vectors(sampling))


def _pairing_and_mask(v: NullSection, w: NullSection, sampling, tol):
    a, b = v.vectors(sampling), w.vectors(sampling)
    # Euclidean norm of a null frame vector is sqrt(2) |spatial part|
    bound = 2.0 * tol * np.abs(a[:, 0] * b[:, 0])
    pair = mk.eta_inner(a, b)
    return pair, np.abs(pair) <= bound


def _proportional_mask(v: NullSection, w: NullSection, sampling, tol) -> np.ndarray:
    return _pairing_and_mask(v, w, sampling, tol)[1]


def definedness(v: NullSection, w: NullSection, sampling: SamplingSet,
                tol: float = DEFINEDNESS_TOL) -> bool:
    """True iff v and w are nowhere proportional on the sampling."""
    return not bool(np.any(_proportional_mask(v, w, sampling, tol)))


def _constant_sign(values: np.ndarray, what: str) -> int:
    if values[0] > 0 and (values > 0).all():
        return 1
    if values[0] < 0 and (values < 0).all():
        return -1
    s = np.sign(values)
    if np.any(s == 0):
        raise ZeroDivisor(f"{what} vanishes at a sampled event")
    if np.any(s != s[0]):
        raise MixedOrientation(f"{what} changes sign across the sampling")
    return int(s[0])


def ternary(u: NullSection, v: NullSection, w: NullSection, sampling: SamplingSet,
            tol: float = DEFINEDNESS_TOL) -> NullSection:
    """[u, v, w] = u g(v, w).

    The result lies on the half-cone of ``u`` when g(v, w) < 0 and on the
    opposite half when g(v, w) > 0; the sign is read off the first sampled
    event and must not change across the sampling.
    """
    pair, bad = _pairing_and_mask(v, w, sampling, tol)
    if bad.any():
        i = int(np.argmax(bad))
        raise ProportionalSections(
            f"middle and right sections are proportional at {sampling.coords[i].tolist()}")
    s = _constant_sign(pair, "g(v, w)")

    def spatial(x):
        a = embed(v.sigma, v.spatial(x))
        b = embed(w.sigma, w.spatial(x))
        return np.asarray(u.spatial(x)) * mk.eta_inner(a, b)[..., None]

    out = NullSection(u.spacetime, u.sigma * s, spatial)
    uv, uvec = u._evaluate(sampling)
    out._seed(sampling, uv * pair[:, None], uvec * pair[:, None])
    return out


def binary_fixed(w: NullSection, u1: NullSection, u2: NullSection, sampling: SamplingSet,
                 tol: float = DEFINEDNESS_TOL) -> NullSection:
    """u1 . u2 = [u1, w, u2] for a fixed section w."""
    return ternary(u1, w, u2, sampling, tol)


def para_associativity_residuals(u1, u2, u3, u4, u5, sampling: SamplingSet,
                                 tol: float = DEFINEDNESS_TOL) -> dict:
    """Relative residuals of the three bracketings against u1 g(u2,u3) g(u4,u5)."""
    left = ternary(ternary(u1, u2, u3, sampling, tol), u4, u5, sampling, tol)
    middle = ternary(u1, ternary(u4, u3, u2, sampling, tol), u5, sampling, tol)
    right = ternary(u1, u2, ternary(u3, u4, u5, sampling, tol), sampling, tol)
    closed = (u1.vectors(sampling) * (g_pair(u2, u3, sampling)
                                      * g_pair(u4, u5, sampling))[:, None])
    lv, mv, rv = left.vectors(sampling), middle.vectors(sampling), right.vectors(sampling)
    return {
        "left_middle": _residual(lv, mv),
        "middle_right": _residual(mv, rv),
        "left_closed": _residual(lv, closed),
        "right_closed": _residual(rv, closed),
    }


# -- arbitrary vector fields: the total ternary algebra ----------------------

@dataclass(frozen=True, eq=False)
class VectorField:
    """Arbitrary vector field given by coordinate components (n, 4)."""

    spacetime: Spacetime
    func: Callable[[np.ndarray], np.ndarray]

    def on(self, sampling: SamplingSet) -> np.ndarray:
        v = np.asarray(self.func(sampling.coords), dtype=float)
        return np.broadcast_to(v, (len(sampling), 4))

    @classmethod
    def constant(cls, st: Spacetime, components) -> "VectorField":
        c = np.array(components, dtype=float)
        return cls(st, lambda x: np.broadcast_to(c, np.shape(x)[:-1] + (4,)))

    @classmethod
    def time_orientation(cls, st: Spacetime) -> "VectorField":
        return cls(st, st.tau.func)

    @classmethod
    def from_section(cls, u: NullSection) -> "VectorField":
        st = u.spacetime

        def func(x):
            return np.einsum("...mb,...b->...m", st.vierbein.func(x), embed(u.sigma, u.spatial(x)))

        return cls(st, func)


def metric_pair(x: VectorField, y: VectorField, sampling: SamplingSet) -> np.ndarray:
    g = x.spacetime.metric(sampling)
    return metric_inner(g, x.on(sampling), y.on(sampling))


def full_ternary(x: VectorField, y: VectorField, z: VectorField,
                 sampling: SamplingSet | None = None) -> VectorField:
    """[x, y, z] = x g(y, z); total, no definedness condition."""
    st = x.spacetime

    def func(c):
        g = st.metric.func(c)
        return np.asarray(x.func(c)) * metric_inner(g, y.func(c), z.func(c))[..., None]

    return VectorField(st, func)


def tau_product(x: VectorField, y: VectorField) -> VectorField:
    """Associative product x . y = [x, tau, y]."""
    return full_ternary(x, VectorField.time_orientation(x.spacetime), y)


def full_para_associativity_residuals(x1, x2, x3, x4, x5, sampling: SamplingSet) -> dict:
    left = full_ternary(full_ternary(x1, x2, x3), x4, x5).on(sampling)
    middle = full_ternary(x1, full_ternary(x4, x3, x2), x5).on(sampling)
    right = full_ternary(x1, x2, full_ternary(x3, x4, x5)).on(sampling)
    closed = x1.on(sampling) * (metric_pair(x2, x3, sampling) * metric_pair(x4, x5, sampling))[:, None]
    scale = max(float(np.max(np.abs(closed))), 1.0)
    return {
        "left_middle": float(np.max(np.abs(left - middle))) / scale,
        "middle_right": float(np.max(np.abs(middle - right))) / scale,
        "left_closed": float(np.max(np.abs(left - closed))) / scale,
    }


# -- heap of nowhere-vanishing functions ------------------------------------

@dataclass(frozen=True, eq=False)
class InvertibleScalarField:
    func: Callable[[np.ndarray], np.ndarray]
    tol: float = 1e-12

    def on(self, sampling: SamplingSet) -> np.ndarray:
        f = np.broadcast_to(np.asarray(self.func(sampling.coords), dtype=float), (len(sampling),))
        if np.any(np.abs(f) <= self.tol) or not np.all(np.isfinite(f)):
            raise ZeroDivisor("scalar field vanishes (or is non-finite) at a sampled event")
        return f

    def inverse(self) -> "InvertibleScalarField":
        return InvertibleScalarField(lambda x: 1.0 / np.asarray(self.func(x)), self.tol)

    @classmethod
    def constant(cls, value: float) -> "InvertibleScalarField":
        return cls(lambda x: np.full(np.shape(x)[:-1], float(value)))


def random_positive_field(seed, log_range=(-1.0, 1.0)) -> InvertibleScalarField:
    """exp of a bounded smooth function: strictly positive everywhere."""
    rng = mk._rng(seed)
    c = rng.uniform(*log_range)
    amp = rng.uniform(0.0, 0.5)
    k = rng.normal(scale=0.5, size=4)
    phase = rng.uniform(0, 2 * np.pi)
    return InvertibleScalarField(lambda x: np.exp(c + amp * np.sin(np.asarray(x) @ k + phase)))


def heap_ternary(f1: InvertibleScalarField, f2: InvertibleScalarField, f3: InvertibleScalarField,
                 sampling: SamplingSet | None = None) -> InvertibleScalarField:
    """{f1, f2, f3} = f1 f2^-1 f3.

    Evaluated as ``f1 / f2 * f3`` so that ``{f, f, g}`` returns ``g`` bit for bit.
    When a sampling is given, ``f2`` is checked for zeros on it first.
    """
    if sampling is not None:
        f2.on(sampling)

    def func(x):
        return np.asarray(f1.func(x)) / np.asarray(f2.func(x)) * np.asarray(f3.func(x))

    return InvertibleScalarField(func, f2.tol)


def heap_inverse(f1: InvertibleScalarField, f2: InvertibleScalarField,
                 f3: InvertibleScalarField) -> InvertibleScalarField:
    """{f1, f2, f3}^-1 written as f1^-1 f2 f3^-1."""
    def func(x):
        return np.asarray(f2.func(x)) / (np.asarray(f1.func(x)) * np.asarray(f3.func(x)))

    return InvertibleScalarField(func, f2.tol)


def scale_section(f: InvertibleScalarField, u: NullSection, sampling: SamplingSet) -> NullSection:
    """Pointwise f u.

    ``f`` must keep one sign on the sampling; a negative ``f`` moves the
    section to the other half-cone as a whole.
    """
    s = _constant_sign(f.on(sampling), "scale factor")

    def spatial(x):
        return np.asarray(f.func(x))[..., None] * np.asarray(u.spatial(x))

    return NullSection(u.spacetime, u.sigma * s, spatial)


def module_distribution_check(f: InvertibleScalarField, u, v, w, sampling: SamplingSet,
                                 tol: float = DEFINEDNESS_TOL) -> float:
    """Relative residual of f [u, v, w] against [f u, f^-1 v, f w]."""
    lhs = f.on(sampling)[:, None] * ternary(u, v, w, sampling, tol).vectors(sampling)
    rhs = ternary(scale_section(f, u, sampling), scale_section(f.inverse(), v, sampling),
                  scale_section(f, w, sampling), sampling, tol).vectors(sampling)
    return _residual(lhs, rhs)


def heap_semiheap_distribution_check(f1, f2, f3, u, v, w, sampling: SamplingSet,
                               tol: float = DEFINEDNESS_TOL) -> float:
    """Relative residual of {f1,f2,f3}[u,v,w] against the distributed form."""
    h = heap_ternary(f1, f2, f3, sampling)
    h_inv = heap_inverse(f1, f2, f3)
    lhs = h.on(sampling)[:, None] * ternary(u, v, w, sampling, tol).vectors(sampling)
    rhs = ternary(scale_section(h, u, sampling), scale_section(h_inv, v, sampling),
                  scale_section(h, w, sampling), sampling, tol).vectors(sampling)
    return _residual(lhs, rhs)
