"""Null tangent bundle of a time-oriented Lorentzian 4-manifold.

Submodules: ``minkowski`` (frame algebra), ``spacetime`` (charts, metrics,
vierbeins), ``cone`` (split null cone charts), ``bundle`` (trivialisations
and named spacetimes), ``heap`` (ternary products on sections),
``distribution`` (canonical one-form, null curves), ``laws`` and ``cli``.
"""
from .bundle import BundlePoint, get_spacetime
from .cone import ConePoint
from .errors import NullBundleError
from .heap import NullSection, ternary
from .minkowski import CausalClass, LorentzTransform, Orientation, classify, eta_inner, orientation

__version__ = "0.1.0"

__all__ = [
    "BundlePoint", "CausalClass", "ConePoint", "LorentzTransform", "NullBundleError",
    "NullSection", "Orientation", "classify", "eta_inner", "get_spacetime",
    "orientation", "ternary",
]
