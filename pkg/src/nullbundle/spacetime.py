"""Chart-based spacetimes: metric fields, time orientation, vierbeins, Weyl rescaling.

Fields are evaluation maps on coordinate arrays of shape ``(..., 4)``; a
field called on an :class:`Event` checks the chart domain first. Nothing
here differentiates the metric.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import minkowski as mk
from .errors import DegenerateMetric, EmptySampling, OutOfDomain


@dataclass(frozen=True, eq=False)
class Chart:
    name: str
    domain: Callable[[np.ndarray], np.ndarray]
    labels: tuple = ("x0", "x1", "x2", "x3")

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        with np.errstate(invalid="ignore"):
            ok = np.asarray(self.domain(x), dtype=bool)
        return ok & np.all(np.isfinite(x), axis=-1)

    def check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != 4:
            raise ValueError(f"coordinates need 4 components, got shape {x.shape}")
        ok = self.contains(x)
        if not np.all(ok):
            bad = x[~ok] if x.ndim > 1 else x
            raise OutOfDomain(f"{np.asarray(bad).tolist()} outside chart {self.name!r}")
        return x


@dataclass(frozen=True, eq=False)
class Event:
    chart: Chart
    x: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        if x.shape != (4,):
            raise ValueError(f"event needs 4 coordinates, got shape {x.shape}")
        self.chart.check(x)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    def __eq__(self, other):
        return (isinstance(other, Event) and other.chart is self.chart
                and np.array_equal(other.x, self.x))

    def __hash__(self):
        return hash((id(self.chart), self.x.tobytes()))


@dataclass(frozen=True, eq=False)
class SamplingSet:
    """Finite ordered list of events sharing one chart, stored as an (n, 4) array."""

    chart: Chart
    coords: np.ndarray

    def __post_init__(self):
        x = np.array(self.coords, dtype=float).reshape(-1, 4)
        if len(x) == 0:
            raise EmptySampling("a sampling needs at least one event")
        self.chart.check(x)
        x.setflags(write=False)
        object.__setattr__(self, "coords", x)

    @classmethod
    def from_events(cls, events: Sequence[Event]) -> "SamplingSet":
        if not events:
            raise EmptySampling("a sampling needs at least one event")
        chart = events[0].chart
        if any(e.chart is not chart for e in events):
            raise ValueError("all events of a sampling must share a chart")
        return cls(chart, np.stack([e.x for e in events]))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return (Event(self.chart, x) for x in self.coords)

    def event(self, i: int) -> Event:
        return Event(self.chart, self.coords[i])


def _coords(chart: Chart, p) -> np.ndarray:
    if isinstance(p, Event):
        if p.chart is not chart:
            raise OutOfDomain(f"event belongs to chart {p.chart.name!r}, not {chart.name!r}")
        return p.x
    if isinstance(p, SamplingSet):
        if p.chart is not chart:
            raise OutOfDomain(f"sampling belongs to chart {p.chart.name!r}, not {chart.name!r}")
        return p.coords
    return chart.check(p)


@dataclass(frozen=True, eq=False)
class _Field:
    chart: Chart
    func: Callable[[np.ndarray], np.ndarray]

    def __call__(self, p) -> np.ndarray:
        return np.asarray(self.func(_coords(self.chart, p)), dtype=float)


class MetricField(_Field):
    """Components g_{mu nu}; returns shape (..., 4, 4)."""


class TimeOrientation(_Field):
    """Coordinate components of the timelike field tau; shape (..., 4)."""


class ScalarField(_Field):
    pass


class VierbeinField(_Field):
    """Frame matrices whose columns are e_a^mu."""

    def dual(self, p) -> np.ndarray:
        """Rows e^a_mu: the matrix inverse of the frame."""
        return np.linalg.inv(self(p))


@dataclass(frozen=True, eq=False)
class Spacetime:
    name: str
    chart: Chart
    metric: MetricField
    tau: TimeOrientation
    vierbein: VierbeinField

    def event(self, x) -> Event:
        return Event(self.chart, x)

    def sampling(self, coords) -> SamplingSet:
        return SamplingSet(self.chart, coords)

    def frame(self, p) -> np.ndarray:
        return self.vierbein(p)

    def tau_frame(self, p) -> np.ndarray:
        return frame_components(self.vierbein(p), self.tau(p))

    def classify(self, p, v_coord, tol: float = mk.DEFAULT_TOL) -> mk.CausalClass:
        return mk.classify(frame_components(self.vierbein(p), v_coord), tol)

    def orientation(self, p, v_coord, tol: float = mk.DEFAULT_TOL) -> mk.Orientation:
        e = self.vierbein(p)
        return mk.orientation(frame_components(e, v_coord),
                              frame_components(e, self.tau(p)), tol)


def signature_check(g: MetricField, p, tol: float = 1e-12) -> bool:
    """True iff g(p) has exactly one negative eigenvalue.

    Raises DegenerateMetric when an eigenvalue is within ``tol`` of zero.
    """
    m = g(p)
    lam = np.linalg.eigvalsh(0.5 * (m + m.T))
    if np.any(np.abs(lam) <= tol):
        raise DegenerateMetric(f"metric eigenvalues {lam} include a (near) zero")
    return bool(lam[0] < 0 and np.all(lam[1:] > 0))


def _frame_from_matrix(m: np.ndarray, tau: np.ndarray, tol: float, order: str) -> np.ndarray:
    m = 0.5 * (m + m.T)
    lam, p = np.linalg.eigh(m)
    if np.any(np.abs(lam) <= tol):
        raise DegenerateMetric(f"metric eigenvalues {lam} include a (near) zero")
    if not (lam[0] < 0 and np.all(lam[1:] > 0)):
        raise DegenerateMetric(f"metric eigenvalues {lam} are not of signature (-,+,+,+)")
    cols = p / np.sqrt(np.abs(lam))
    spatial = cols[:, 1:]
    # each spatial column points along +(its dominant coordinate axis)
    dominant = np.argmax(np.abs(spatial), axis=0)
    spatial = spatial * np.where(spatial[dominant, range(3)] < 0, -1.0, 1.0)
    if order == "axis":
        perm = np.lexsort((lam[1:], dominant))
    elif order == "eigenvalue":
        perm = np.arange(3)
    else:
        raise ValueError(f"unknown spatial ordering {order!r}")
    e = np.column_stack([cols[:, 0], spatial[:, perm]])
    if e[:, 0] @ m @ tau > 0:
        e[:, 0] = -e[:, 0]
    if np.linalg.det(e) < 0:
        e[:, 1] = -e[:, 1]
    return e


def vierbein_from_metric(g: MetricField, tau: TimeOrientation, p,
                         tol: float = 1e-12, order: str = "axis") -> np.ndarray:
    """Orthonormal frame at ``p`` from the eigen-decomposition of g(p).

    Columns are ``e_a^mu``; ``e_0`` is the negative-eigenvalue direction
    flipped to be future-pointing with respect to ``tau``, and ``e_1`` is
    flipped if needed so the frame has positive determinant. ``order="axis"``
    sorts spatial legs by dominant coordinate axis (so diagonal metrics give
    diagonal frames); ``order="eigenvalue"`` sorts them by eigenvalue.
    """
    return _frame_from_matrix(g(p), tau(p), tol, order)


def eigen_vierbein(g: MetricField, tau: TimeOrientation, tol: float = 1e-12,
                   order: str = "axis") -> VierbeinField:
    """Vierbein field evaluating :func:`vierbein_from_metric` pointwise."""

    def func(x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, 4)
        ms = np.asarray(g.func(flat)).reshape(-1, 4, 4)
        ts = np.asarray(tau.func(flat)).reshape(-1, 4)
        out = np.stack([_frame_from_matrix(m, t, tol, order) for m, t in zip(ms, ts)])
        return out.reshape(x.shape[:-1] + (4, 4))

    return VierbeinField(g.chart, func)


def frame_components(frame, v_coord) -> np.ndarray:
    """v^a = e^a_mu v^mu for a frame with columns e_a^mu."""
    return np.linalg.solve(np.asarray(frame, dtype=float), np.asarray(v_coord, dtype=float))


def coordinate_components(frame, v_frame) -> np.ndarray:
    return np.asarray(frame, dtype=float) @ np.asarray(v_frame, dtype=float)


def metric_inner(g_matrix, v, w):
    """g_{mu nu} v^mu w^nu, broadcasting over leading axes."""
    return np.einsum("...m,...mn,...n->...", v, g_matrix, w)


def weyl_transform(g: MetricField, f: ScalarField) -> MetricField:
    """Rescaled metric exp(-2 f) g."""

    def func(x):
        return np.exp(-2.0 * np.asarray(f.func(x)))[..., None, None] * g.func(x)

    return MetricField(g.chart, func)


def constant_metric(matrix, chart: Chart) -> MetricField:
    m = np.array(matrix, dtype=float)

    def func(x):
        x = np.asarray(x)
        return np.broadcast_to(m, x.shape[:-1] + (4, 4)).copy()

    return MetricField(chart, func)


def _everywhere(x):
    return np.ones(np.shape(x)[:-1], dtype=bool)


CARTESIAN = Chart("cartesian", _everywhere, ("t", "x", "y", "z"))


def minkowski() -> Spacetime:
    """Flat spacetime in Cartesian coordinates with tau = d/dt and the identity frame."""
    g = constant_metric(mk.ETA, CARTESIAN)

    def tau(x):
        x = np.asarray(x)
        return np.broadcast_to(mk.TAU0, x.shape).copy()

    def frame(x):
        x = np.asarray(x)
        return np.broadcast_to(np.eye(4), x.shape[:-1] + (4, 4)).copy()

    return Spacetime("minkowski", CARTESIAN, g, TimeOrientation(CARTESIAN, tau),
                     VierbeinField(CARTESIAN, frame))
