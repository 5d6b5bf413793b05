"""Canonical one-form on the future null bundle, its kernel, and null curves.

Tangent vectors to the bundle are split into four base components (in the
orthonormal frame) and three fibre components along d/dv^i.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import minkowski as mk
from .bundle import BundlePoint
from .cone import ConePoint, cone_embed, embed
from .errors import LeftDomain, NonNullCurve, NotRegular, PastConeUnsupported, StepTooLarge
from .heap import NullSection
from .spacetime import Chart, Event, Spacetime, VierbeinField, metric_inner

RANK_TOL = 1e-8


@dataclass(frozen=True)
class BundleTangent:
    base: np.ndarray
    fibre: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.base, dtype=float).reshape(4)
        f = np.asarray(self.fibre, dtype=float).reshape(3)
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(f))):
            raise ValueError("bundle tangent has non-finite components")
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "fibre", f)

    def __add__(self, other):
        return BundleTangent(self.base + other.base, self.fibre + other.fibre)

    def __mul__(self, k):
        return BundleTangent(k * self.base, k * self.fibre)

    __rmul__ = __mul__

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.base, self.fibre])


def dpi(x: BundleTangent) -> np.ndarray:
    """Pushforward along the projection: keep the base part."""
    return x.base.copy()


def _future(c: ConePoint):
    if c.sigma != 1:
        raise PastConeUnsupported("the canonical one-form is defined on the future cone only")


def theta(c: ConePoint, x: BundleTangent) -> float:
    """-|v| x^0 + v . x_spatial, i.e. eta(v, dpi(x))."""
    _future(c)
    return float(-c.norm * x.base[0] + c.v @ x.base[1:])


def theta_components(c: ConePoint, dual) -> np.ndarray:
    """Coordinate components Theta_mu = -e^0_mu |v| + e^i_mu v^i.

    ``dual`` holds the inverse vierbein as rows e^a_mu.
    """
    _future(c)
    lowered = mk.ETA @ cone_embed(c)
    return lowered @ np.asarray(dual, dtype=float)


def kernel_basis(c: ConePoint) -> list:
    """Six tangents spanning ker(Theta) at v, in frame components.

    The first three are the fibre directions d/dv^i; the other three have
    base part v^j e_0 + |v| e_j and no fibre part.
    """
    _future(c)
    out = [BundleTangent(np.zeros(4), np.eye(3)[i]) for i in range(3)]
    for j in range(3):
        base = np.zeros(4)
        base[0] = c.v[j]
        base[1 + j] = c.norm
        out.append(BundleTangent(base, np.zeros(3)))
    return out


def kernel_basis_coordinates(c: ConePoint, frame) -> np.ndarray:
    """Kernel basis as a (6, 7) array: coordinate base components then fibre components."""
    frame = np.asarray(frame, dtype=float)
    rows = [np.concatenate([frame @ x.base, x.fibre]) for x in kernel_basis(c)]
    return np.array(rows)


def numerical_rank(rows, tol: float = RANK_TOL) -> int:
    s = np.linalg.svd(np.asarray(rows, dtype=float), compute_uv=False)
    return int(np.sum(s > tol * s[0])) if s[0] > 0 else 0


# -- curves ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CurveSamples:
    """Sampled curve: parameter values, coordinates and coordinate derivatives."""

    chart: Chart
    t: np.ndarray
    x: np.ndarray
    dx: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float).reshape(-1)
        x = np.asarray(self.x, dtype=float).reshape(-1, 4)
        dx = np.asarray(self.dx, dtype=float).reshape(-1, 4)
        if not (len(t) == len(x) == len(dx)):
            raise ValueError("t, x and dx must have the same number of samples")
        if len(t) > 1 and np.any(np.diff(t) <= 0):
            raise ValueError("curve parameter must be strictly increasing")
        self.chart.check(x)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "dx", dx)

    @classmethod
    def from_positions(cls, chart: Chart, t, x) -> "CurveSamples":
        """Fill derivatives by central differences (second-order one-sided at the ends)."""
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        edge = 2 if len(t) > 2 else 1
        dx = np.gradient(x, t, axis=0, edge_order=edge)
        return cls(chart, t, x, dx)

    def __len__(self):
        return len(self.t)


def _frame_velocity(curve: CurveSamples, vierbein: VierbeinField, tol: float):
    speed = np.linalg.norm(curve.dx, axis=1)
    if np.any(speed <= tol):
        i = int(np.argmax(speed <= tol))
        raise NotRegular(f"curve derivative vanishes at t = {curve.t[i]}")
    dual = np.linalg.inv(vierbein(curve.x))
    va = np.einsum("nam,nm->na", dual, curve.dx)
    q = mk.eta_inner(va, va)
    scale = np.maximum(1.0, np.einsum("na,na->n", va, va))
    bad = np.abs(q) > tol * scale
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NonNullCurve(f"velocity at t = {curve.t[i]} has eta(v, v) = {q[i]:.3e}")
    return va


def prolong(curve: CurveSamples, vierbein: VierbeinField, tol: float = mk.DEFAULT_TOL) -> list:
    """Lift a regular null curve to the bundle: fibre coordinates v^i = e^i_nu dx^nu/dt."""
    va = _frame_velocity(curve, vierbein, tol)
    return [BundlePoint(Event(curve.chart, x), ConePoint(1 if v[0] > 0 else -1, v[1:]))
            for x, v in zip(curve.x, va)]


def prolong_arrays(curve: CurveSamples, vierbein: VierbeinField, tol: float = mk.DEFAULT_TOL):
    """``(sigma, v)`` arrays of the prolongation."""
    va = _frame_velocity(curve, vierbein, tol)
    return np.where(va[:, 0] > 0, 1, -1), va[:, 1:]


@dataclass(frozen=True, eq=False)
class ExplicitNullODE:
    """dx/dt = k(x) for a future-directed null section k."""

    k: NullSection

    def __post_init__(self):
        if self.k.sigma != 1:
            raise ValueError("an explicit null ODE needs a future-directed field")

    @property
    def spacetime(self) -> Spacetime:
        return self.k.spacetime

    def rhs(self, x) -> np.ndarray:
        """Coordinate components of k at coordinates x of shape (..., 4)."""
        x = np.asarray(x, dtype=float)
        st = self.spacetime
        e = st.vierbein.func(x)
        return np.einsum("...mb,...b->...m", e, embed(self.k.sigma, self.k.spatial(x)))


def is_solution(curve: CurveSamples, ode: ExplicitNullODE, tol: float = 1e-8) -> bool:
    """True iff the curve's derivative equals k along it at every sample."""
    prolong_arrays(curve, ode.spacetime.vierbein)
    k = ode.rhs(curve.x)
    scale = np.maximum(1.0, np.max(np.abs(k), axis=1))
    return bool(np.all(np.max(np.abs(curve.dx - k), axis=1) <= tol * scale))


def is_implicit_solution(curve: CurveSamples, vierbein: VierbeinField,
                         member: Callable[[BundlePoint], bool]) -> bool:
    """Implicit equation given as a membership predicate on bundle points."""
    return all(member(b) for b in prolong(curve, vierbein))


def integrate_explicit(ode: ExplicitNullODE, p0, t_end: float, step: float,
                       tol_drift: float = 1e-8) -> CurveSamples:
    """Classical fourth-order Runge-Kutta for dx/dt = k(x), from t = 0 to ``t_end``.

    ``t_end`` may be negative (integration backwards). The last step is
    shortened to land on ``t_end`` exactly.
    """
    if not step > 0:
        raise ValueError(f"step must be positive, got {step!r}")
    st = ode.spacetime
    chart = st.chart
    x = np.array(p0.x if isinstance(p0, Event) else p0, dtype=float)
    chart.check(x)
    n = max(1, int(np.ceil(abs(t_end) / step - 1e-9)))
    ts = np.linspace(0.0, t_end, n + 1)
    xs = np.empty((n + 1, 4))
    xs[0] = x

    def f(y):
        if not chart.contains(y):
            raise LeftDomain(f"trajectory left chart {chart.name!r} at {y.tolist()}")
        return ode.rhs(y)

    for i in range(n):
        h = ts[i + 1] - ts[i]
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not chart.contains(x):
            raise LeftDomain(f"trajectory left chart {chart.name!r} at {x.tolist()}")
        xs[i + 1] = x
    dxs = ode.rhs(xs)
    drift = nullness_drift(st, xs, dxs)
    if np.max(drift) > tol_drift:
        raise StepTooLarge(f"nullness drift {np.max(drift):.3e} exceeds {tol_drift:.1e}")
    if t_end < 0:
        return CurveSamples(chart, ts[::-1], xs[::-1], dxs[::-1])
    return CurveSamples(chart, ts, xs, dxs)


def nullness_drift(st: Spacetime, xs, dxs) -> np.ndarray:
    """|g(dx, dx)| / |dx|^2 at each sample."""
    g = st.metric(np.asarray(xs))
    return np.abs(metric_inner(g, dxs, dxs)) / np.einsum("nm,nm->n", dxs, dxs)


def schwarzschild_radial_field(st: Spacetime, outgoing: bool = True) -> NullSection:
    """Radial null field d/dt +- (1 - 1/r) d/dr, written in the static frame.

    Its frame components are sqrt(1 - 1/r) (e_0 +- e_1).
    """
    sign = 1.0 if outgoing else -1.0

    def spatial(x):
        x = np.asarray(x, dtype=float)
        s = np.sqrt(1.0 - 1.0 / x[..., 1])
        zero = np.zeros_like(s)
        return np.stack([sign * s, zero, zero], axis=-1)

    return NullSection(st, 1, spatial)


def radial_invariant(xs) -> np.ndarray:
    """t - r - ln(r - 1): constant along outgoing radial null rays."""
    xs = np.asarray(xs, dtype=float)
    return xs[..., 0] - xs[..., 1] - np.log(xs[..., 1] - 1.0)
