"""Local and global trivialisations of the null tangent bundle, plus named spacetimes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import minkowski as mk
from .cone import ConePoint, cone_embed, embed
from .errors import EmptySampling, OutOfDomain
from .spacetime import (Chart, Event, MetricField, SamplingSet, Spacetime,
                        TimeOrientation, VierbeinField, frame_components,
                        metric_inner, minkowski)


@dataclass(frozen=True, eq=False)
class BundlePoint:
    """A nonzero null vector at an event, in frame (fibre) coordinates."""

    p: Event
    c: ConePoint

    @property
    def vector(self) -> np.ndarray:
        """Frame components (sigma |v|, v)."""
        return cone_embed(self.c)

    def __eq__(self, other):
        return isinstance(other, BundlePoint) and other.p == self.p and other.c == self.c

    def __hash__(self):
        return hash((self.p, self.c))


def projection(b: BundlePoint) -> Event:
    return b.p


def local_triv(b: BundlePoint):
    """Bundle chart: ``(x^mu, sigma, v^i)``."""
    b.p.chart.check(b.p.x)
    return np.array(b.p.x), b.c.sigma, np.array(b.c.v)


def local_triv_inverse(chart: Chart, x, sigma: int, v) -> BundlePoint:
    """Rebuild the bundle point; its ``vector`` carries the time component sigma |v|."""
    return BundlePoint(Event(chart, x), ConePoint(sigma, v))


@dataclass(frozen=True, eq=False)
class GlobalFrame:
    """A vierbein field declared valid on its whole chart (parallelisable case)."""

    vierbein: VierbeinField

    def residual(self, metric: MetricField, p) -> float:
        """max |E^T g E - eta| at p (or over a batch)."""
        e = self.vierbein(p)
        g = metric(p)
        return float(np.max(np.abs(np.swapaxes(e, -1, -2) @ g @ e - mk.ETA)))


def global_triv(frame: GlobalFrame, p, c: ConePoint) -> np.ndarray:
    """Coordinate components of sigma |v| e_0 + v^i e_i at p."""
    return frame.vierbein(p) @ cone_embed(c)


def global_triv_array(frame: GlobalFrame, coords, sigma, v) -> np.ndarray:
    """Batch version over (n, 4) coordinates and (n, 3) fibre coordinates."""
    e = frame.vierbein(coords)
    return np.einsum("...mn,...n->...m", e, embed(sigma, v))


def global_triv_inverse(frame: GlobalFrame, p, w_coord, tol: float = mk.DEFAULT_TOL) -> ConePoint:
    from .cone import cone_project
    return cone_project(frame_components(frame.vierbein(p), w_coord), tol)


def frame_gauge(e_from, e_to) -> mk.LorentzTransform:
    """Lorentz matrix taking frame components w.r.t. ``e_from`` to those w.r.t. ``e_to``.

    Both frames must be orthonormal at the same event and expressed in the
    same coordinates.
    """
    return mk.LorentzTransform(np.linalg.solve(np.asarray(e_to), np.asarray(e_from)))


def restrict(family, sampling: SamplingSet):
    """Restrict bundle points or a section to the events of a sampling.

    A list of :class:`BundlePoint` is filtered to those over events of the
    sampling; anything with a ``sample`` method (a section) is evaluated on
    it, returning ``(sigma, v)`` arrays.
    """
    if sampling is None or len(sampling) == 0:
        raise EmptySampling("cannot restrict to an empty sampling")
    if hasattr(family, "sample"):
        return family.sample(sampling)
    events = set(sampling)
    return [b for b in family if b.p in events]


# -- Schwarzschild exterior with r_s = 1 ------------------------------------

def _schwarzschild_domain(x):
    x = np.asarray(x)
    r, th, ph = x[..., 1], x[..., 2], x[..., 3]
    return (r > 1.0) & (th > 0.0) & (th < np.pi) & (ph > -np.pi) & (ph < np.pi)


SCHWARZSCHILD_CHART = Chart("schwarzschild", _schwarzschild_domain, ("t", "r", "theta", "phi"))


def _schwarzschild_metric(x):
    x = np.asarray(x, dtype=float)
    r, th = x[..., 1], x[..., 2]
    f = 1.0 - 1.0 / r
    g = np.zeros(x.shape[:-1] + (4, 4))
    g[..., 0, 0] = -f
    g[..., 1, 1] = 1.0 / f
    g[..., 2, 2] = r**2
    g[..., 3, 3] = (r * np.sin(th)) ** 2
    return g


def _schwarzschild_frame(x):
    x = np.asarray(x, dtype=float)
    r, th = x[..., 1], x[..., 2]
    f = 1.0 - 1.0 / r
    e = np.zeros(x.shape[:-1] + (4, 4))
    e[..., 0, 0] = 1.0 / np.sqrt(f)
    e[..., 1, 1] = np.sqrt(f)
    e[..., 2, 2] = 1.0 / r
    e[..., 3, 3] = 1.0 / (r * np.sin(th))
    return e


def _static_tau(x):
    x = np.asarray(x)
    return np.broadcast_to(mk.TAU0, x.shape).copy()


def schwarzschild() -> Spacetime:
    """Schwarzschild exterior (mass 1/2, so r_s = 1) in Schwarzschild coordinates.

    tau = d/dt and the diagonal static frame. The chart excludes the poles.
    """
    chart = SCHWARZSCHILD_CHART
    return Spacetime("schwarzschild", chart, MetricField(chart, _schwarzschild_metric),
                     TimeOrientation(chart, _static_tau), VierbeinField(chart, _schwarzschild_frame))


SPACETIMES: dict[str, Callable[[], Spacetime]] = {
    "minkowski": minkowski,
    "schwarzschild": schwarzschild,
}


def get_spacetime(name: str) -> Spacetime:
    try:
        return SPACETIMES[name]()
    except KeyError:
        raise OutOfDomain(f"unknown spacetime {name!r}; choose from {sorted(SPACETIMES)}") from None


def default_sampling(st: Spacetime, n: int = 20, r_range=(1.1, 10.0)) -> SamplingSet:
    """A connected path of ``n`` events used as the default evaluation grid.

    Schwarzschild: radial path on the equator with r spread over ``r_range``.
    Other spacetimes: a straight timelike-ish path through the origin.
    """
    if st.name == "schwarzschild":
        r = np.linspace(*r_range, n)
        x = np.column_stack([np.zeros(n), r, np.full(n, np.pi / 2), np.zeros(n)])
    else:
        s = np.linspace(-1.0, 1.0, n)
        x = np.column_stack([s, 0.5 * s, 0.25 * s, -0.3 * s])
    return SamplingSet(st.chart, x)


def is_future(st: Spacetime, coords, w_coord, tol: float = mk.DEFAULT_TOL) -> np.ndarray:
    """g(w, tau) < -tol pointwise."""
    return metric_inner(st.metric(coords), w_coord, st.tau(coords)) < -tol
