"""The split null cone: its two charts, the homothety, and the fibre transitions.

A cone point is stored as an explicit half-cone sign plus its spatial
frame components; the time component is always recomputed as
``sigma * |v|``. Array helpers (``embed``, ``project``, ...) operate on
``(sigma, v)`` batches with ``v`` of shape ``(n, 3)`` so that section
algebra can run vectorised over samplings.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import minkowski as mk
from .errors import NonPositiveScale, NotNull, ZeroSpatialPart, ZeroVector

# homogeneity degree of each coordinate under the homothety
WEIGHT_BASE = 0
WEIGHT_FIBRE = 1


@dataclass(frozen=True, eq=False)
class ConePoint:
    sigma: int
    v: np.ndarray

    def __post_init__(self):
        if self.sigma not in (1, -1):
            raise ValueError(f"sigma must be +1 or -1, got {self.sigma!r}")
        v = np.array(self.v, dtype=float)
        if v.shape != (3,):
            raise ValueError(f"cone point needs 3 spatial components, got shape {v.shape}")
        n = np.linalg.norm(v)
        if not np.isfinite(n) or n == 0.0:
            raise ZeroSpatialPart(f"spatial part {v} is zero or non-finite")
        v.setflags(write=False)
        object.__setattr__(self, "sigma", int(self.sigma))
        object.__setattr__(self, "v", v)

    @property
    def orientation(self) -> mk.Orientation:
        return mk.Orientation.from_sign(self.sigma)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.v))

    def __eq__(self, other):
        return (isinstance(other, ConePoint) and other.sigma == self.sigma
                and np.array_equal(other.v, self.v))

    def __hash__(self):
        return hash((self.sigma, self.v.tobytes()))

    def isclose(self, other: "ConePoint", tol: float = 1e-12) -> bool:
        scale = max(1.0, self.norm)
        return self.sigma == other.sigma and bool(np.max(np.abs(self.v - other.v)) <= tol * scale)

    def __repr__(self):
        s = "+" if self.sigma > 0 else "-"
        return f"ConePoint({s}, {self.v.tolist()})"


def embed(sigma, v) -> np.ndarray:
    """Batch chart inverse: ``(sigma * |v|, v)``."""
    v = np.asarray(v, dtype=float)
    t = np.asarray(sigma, dtype=float) * np.linalg.norm(v, axis=-1)
    return np.concatenate([t[..., None], v], axis=-1)


def cone_embed(c: ConePoint, tol: float = 0.0) -> np.ndarray:
    if c.norm <= tol:
        raise ZeroSpatialPart(f"|v| = {c.norm:.3e} is within tolerance of zero")
    return embed(c.sigma, c.v)


def cone_project(v, tol: float = mk.DEFAULT_TOL) -> ConePoint:
    """Chart map of a null frame vector: ``(sign v0, spatial part)``."""
    v = mk.frame_vector(v)
    cls = mk.classify(v, tol)  # raises ZeroVector
    if cls is not mk.CausalClass.NULL:
        raise NotNull(f"{v.tolist()} is {cls.value}, not null")
    if v[0] == 0.0:
        raise ZeroVector(f"{v.tolist()} has no time component to fix the half-cone")
    return ConePoint(1 if v[0] > 0 else -1, v[1:])


def homothety(lam: float, c: ConePoint) -> ConePoint:
    """Action of the positive reals on the fibre: v -> lam * v, sigma kept."""
    if not lam > 0:
        raise NonPositiveScale(f"the homothety is an action of (0, inf) only, got {lam!r}")
    return ConePoint(c.sigma, lam * c.v)


def transition_array(transform: mk.LorentzTransform, sigma, v) -> np.ndarray:
    """Fibre coordinate change v^i' = L^i'_j v^j + L^i'_0 sigma |v| on batches."""
    m = transform.matrix
    v = np.asarray(v, dtype=float)
    t = np.asarray(sigma, dtype=float) * np.linalg.norm(v, axis=-1)
    return v @ m[1:, 1:].T + t[..., None] * m[1:, 0]


def transition(transform: mk.LorentzTransform, c: ConePoint) -> ConePoint:
    """Fibre coordinates of the same null vector in a Lorentz-rotated frame.

    The half-cone is preserved by orthochronous transformations, so the
    sign is carried over unchanged.
    """
    return ConePoint(c.sigma, transition_array(transform, c.sigma, c.v))


def transition_geometric(transform: mk.LorentzTransform, c: ConePoint) -> ConePoint:
    """Same map by the embed, transform, project route."""
    return cone_project(mk.apply_transform(transform, cone_embed(c)))


def random_cone_point(seed, sigma: int | None = None, scale_range=(0.1, 10.0)) -> ConePoint:
    rng = mk._rng(seed)
    if sigma is None:
        sigma = 1 if rng.random() < 0.5 else -1
    v = mk.random_null(rng, mk.Orientation.from_sign(sigma), scale_range)
    return ConePoint(sigma, v[1:])
