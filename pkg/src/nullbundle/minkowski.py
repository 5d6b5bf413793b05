"""Frame-level Minkowski algebra.

Vectors are plain ``numpy`` arrays of shape ``(4,)`` (or ``(n, 4)`` for
batches) holding components in an orthonormal frame, time component first.
The pairing is ``eta = diag(-1, 1, 1, 1)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import BadDirection, OrientationUndecidable, ZeroVector

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
ETA.setflags(write=False)

_ETA_DIAG = np.array([-1.0, 1.0, 1.0, 1.0])

TAU0 = np.array([1.0, 0.0, 0.0, 0.0])
TAU0.setflags(write=False)

DEFAULT_TOL = 1e-9


class CausalClass(enum.Enum):
    TIMELIKE = "timelike"
    NULL = "null"
    SPACELIKE = "spacelike"


class Orientation(enum.Enum):
    FUTURE = "future"
    PAST = "past"

    @property
    def sign(self) -> int:
        return 1 if self is Orientation.FUTURE else -1

    @classmethod
    def from_sign(cls, sign: float) -> "Orientation":
        return cls.FUTURE if sign > 0 else cls.PAST


def frame_vector(components) -> np.ndarray:
    """Validate and return a float array of shape (4,)."""
    v = np.asarray(components, dtype=float)
    if v.shape != (4,):
        raise ValueError(f"frame vector needs 4 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("frame vector has non-finite components")
    return v


def eta_inner(v, w):
    """Minkowski pairing -v0 w0 + v1 w1 + v2 w2 + v3 w3 (broadcasts over leading axes)."""
    return (np.asarray(v, dtype=float) * w) @ _ETA_DIAG


def classify(v, tol: float = DEFAULT_TOL) -> CausalClass:
    v = frame_vector(v)
    norm2 = float(v @ v)
    if np.all(np.abs(v) <= tol):
        raise ZeroVector(f"cannot classify the zero vector {v}")
    q = float(eta_inner(v, v))
    if abs(q) <= tol * max(1.0, norm2):
        return CausalClass.NULL
    return CausalClass.TIMELIKE if q < 0 else CausalClass.SPACELIKE


def orientation(v, tau=TAU0, tol: float = DEFAULT_TOL) -> Orientation:
    """Future iff eta(v, tau) < 0.

    ``v`` should be causal and ``tau`` timelike; a pairing within ``tol`` of
    zero raises ``OrientationUndecidable`` instead of guessing.
    """
    p = float(eta_inner(frame_vector(v), frame_vector(tau)))
    if p < -tol:
        return Orientation.FUTURE
    if p > tol:
        return Orientation.PAST
    raise OrientationUndecidable(f"eta(v, tau) = {p:.3e} is within tolerance of zero")


@dataclass(frozen=True, eq=False)
class LorentzTransform:
    """Restricted Lorentz transformation acting on frame components as ``v' = L @ v``."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"Lorentz matrix must be 4x4, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def is_valid(self, tol: float = 1e-10) -> bool:
        m = self.matrix
        scale = max(1.0, float(np.max(np.abs(m))) ** 2)
        return (
            np.max(np.abs(m.T @ ETA @ m - ETA)) <= tol * scale
            and m[0, 0] > 0
            and np.linalg.det(m) > 0
        )

    def __matmul__(self, other):
        if isinstance(other, LorentzTransform):
            return LorentzTransform(self.matrix @ other.matrix)
        return NotImplemented

    def inverse(self) -> "LorentzTransform":
        # eta L^T eta is the exact inverse of a Lorentz matrix
        return LorentzTransform(ETA @ self.matrix.T @ ETA)

    @classmethod
    def identity(cls) -> "LorentzTransform":
        return cls(np.eye(4))


def boost(direction, rapidity: float, tol: float = 1e-9) -> LorentzTransform:
    """Pure boost of the frame along ``direction``.

    Components transform as ``v0' = cosh(phi) v0 - sinh(phi) n.v`` so the
    future null vector along ``n`` is redshifted by ``exp(-phi)``.
    """
    n = np.asarray(direction, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > tol:
        raise BadDirection(f"boost direction must be a unit 3-vector, got {direction!r}")
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    m = np.eye(4)
    m[0, 0] = ch
    m[0, 1:] = -sh * n
    m[1:, 0] = -sh * n
    m[1:, 1:] += (ch - 1.0) * np.outer(n, n)
    return LorentzTransform(m)


def rotation(r3) -> LorentzTransform:
    """Embed a proper 3x3 rotation as a spatial Lorentz transformation."""
    r3 = np.asarray(r3, dtype=float)
    m = np.eye(4)
    m[1:, 1:] = r3
    return LorentzTransform(m)


def apply_transform(transform: LorentzTransform, v):
    """Transformed frame components; batches of shape (n, 4) are accepted."""
    v = np.asarray(v, dtype=float)
    return v @ transform.matrix.T


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_rotation(seed) -> np.ndarray:
    rng = _rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_unit3(seed, size=None) -> np.ndarray:
    rng = _rng(seed)
    shape = (3,) if size is None else (size, 3)
    x = rng.standard_normal(shape)
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def random_lorentz(seed, max_rapidity: float = 2.0) -> LorentzTransform:
    """A boost composed with a rotation; covers the restricted group."""
    rng = _rng(seed)
    b = boost(random_unit3(rng), rng.uniform(-max_rapidity, max_rapidity))
    return b @ rotation(random_rotation(rng))


def random_null(seed, orientation: Orientation = Orientation.FUTURE,
                scale_range=(0.1, 10.0), size=None) -> np.ndarray:
    """Null frame vector(s) with time component ``+-|spatial|``.

    Deterministic for an integer seed. Magnitudes are log-uniform in
    ``scale_range``.
    """
    lo, hi = scale_range
    if not 0 < lo <= hi:
        raise ValueError(f"scale range must lie in (0, inf), got {scale_range!r}")
    rng = _rng(seed)
    n = random_unit3(rng, size)
    mag = np.exp(rng.uniform(np.log(lo), np.log(hi), size=size))
    spatial = n * np.asarray(mag)[..., None]
    t = orientation.sign * np.linalg.norm(spatial, axis=-1)
    return np.concatenate([np.asarray(t)[..., None], spatial], axis=-1)
