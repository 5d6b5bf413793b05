"""Seeded randomized verification suites for the algebraic laws.

Each suite draws its own random stream from ``(seed, suite index)`` so
suites are independent of one another and of the order they run in. A
trial fails when its residual exceeds the suite tolerance or when it
raises; failures are counted, never propagated.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import heap as h
from . import minkowski as mk
from .bundle import default_sampling
from .errors import NullBundleError, ProportionalSections
from .spacetime import SamplingSet, Spacetime

LAW_TOL = 1e-10
HEAP_TOL = 1e-14
CLOSURE_TOL = 1e-12


@dataclass(frozen=True)
class LawReport:
    law: str
    trials: int
    failures: int
    max_residual: float
    seed: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "law": self.law,
            "trials": self.trials,
            "failures": self.failures,
            "max_residual": self.max_residual,
            "seed": self.seed,
            "tol": self.tol,
            "pass": self.passed,
        }


def corrupted_ternary(u, v, w, sampling, tol=h.DEFINEDNESS_TOL):
    """Mutant of the ternary product: flips the time component of the middle argument."""
    flipped = h.NullSection(v.spacetime, -v.sigma, v.spatial)
    return h.ternary(u, flipped, w, sampling, tol)


def _run(trials: int, body: Callable[[int], float], tol: float):
    failures = 0
    worst = 0.0
    for i in range(trials):
        try:
            r = body(i)
        except NullBundleError:
            failures += 1
            continue
        if not r <= tol:
            failures += 1
        if math.isfinite(r):
            worst = max(worst, r)
    return failures, worst


def para_associativity(st, sampling, rng, trials, tol=LAW_TOL, ternary=h.ternary):
    us = h.random_sections(st, rng, 5 * trials, prefetch=sampling)

    def body(i):
        u1, u2, u3, u4, u5 = us[5 * i:5 * i + 5]
        left = ternary(ternary(u1, u2, u3, sampling), u4, u5, sampling).vectors(sampling)
        middle = ternary(u1, ternary(u4, u3, u2, sampling), u5, sampling).vectors(sampling)
        right = ternary(u1, u2, ternary(u3, u4, u5, sampling), sampling).vectors(sampling)
        closed = u1.vectors(sampling) * (h.g_pair(u2, u3, sampling)
                                         * h.g_pair(u4, u5, sampling))[:, None]
        return max(h._residual(left, middle), h._residual(middle, right),
                   h._residual(left, closed), h._residual(right, closed))

    return _run(trials, body, tol)


def fibrewise_para_associativity(st, sampling, rng, trials, tol=LAW_TOL, ternary=h.ternary):
    """Same law with the sampling collapsed to one event: the semiheap on a single cone."""
    single = SamplingSet(sampling.chart, sampling.coords[:1])
    return para_associativity(st, single, rng, trials, tol, ternary)


def closure(st, sampling, rng, trials, tol=CLOSURE_TOL, ternary=h.ternary):
    """Products are null and nowhere vanishing."""
    us = h.random_sections(st, rng, 3 * trials, prefetch=sampling)

    def body(i):
        u, v, w = us[3 * i:3 * i + 3]
        out = ternary(u, v, w, sampling)
        vec = out.vectors(sampling)
        sq = np.einsum("na,na->n", vec, vec)
        if np.any(sq == 0):
            return math.inf
        return float(np.max(np.abs(mk.eta_inner(vec, vec)) / sq))

    return _run(trials, body, tol)


def _separated_pair(st, rng):
    """Two sections that are nowhere proportional, by construction.

    Ripple sections stay within ~23.6 degrees of their constant parts. Same
    half-cone: constant parts at least 60 degrees apart leave a gap of at
    least ~13 degrees, so the spatial parts never align. Opposite
    half-cones: constant parts at most 90 degrees apart keep the spatial
    parts from ever being anti-aligned.
    """
    s1 = 1 if rng.random() < 0.5 else -1
    s2 = 1 if rng.random() < 0.5 else -1
    a = mk.random_unit3(rng)
    while True:
        b = mk.random_unit3(rng)
        c = float(a @ b)
        if (s1 == s2 and c <= 0.5) or (s1 != s2 and c >= 0.0):
            break
    v = h.ripple_section(st, s1, a * rng.uniform(0.5, 2.0), rng)
    w = h.ripple_section(st, s2, b * rng.uniform(0.5, 2.0), rng)
    return v, w


def _proportional_pair(st, rng, sampling):
    v = h.random_section(st, rng)
    f = h.random_positive_field(rng)
    if rng.random() < 0.5:
        f = h.InvertibleScalarField(lambda x, f=f: -np.asarray(f.func(x)))
    return v, h.scale_section(f, v, sampling)


def partiality_gate(st, sampling, rng, trials, tol=0.0, ternary=h.ternary):
    """Proportional pairs must be rejected and separated pairs accepted.

    Residual is 0 for a correct verdict and 1 for a wrong one.
    """
    def body(i):
        u = h.random_section(st, rng)
        v, w = _proportional_pair(st, rng, sampling)
        try:
            ternary(u, v, w, sampling)
            return 1.0
        except ProportionalSections:
            pass
        v, w = _separated_pair(st, rng)
        ternary(u, v, w, sampling)
        return 0.0

    return _run(trials, body, tol)


def fixed_binary_associativity(st, sampling, rng, trials, tol=LAW_TOL, ternary=h.ternary):
    """(a.b).c = a.(b.c) for a . b = [a, w, b]."""
    us = h.random_sections(st, rng, 4 * trials, prefetch=sampling)

    def body(i):
        w, a, b, c = us[4 * i:4 * i + 4]

        def dot(x, y):
            return ternary(x, w, y, sampling)

        left = dot(dot(a, b), c).vectors(sampling)
        right = dot(a, dot(b, c)).vectors(sampling)
        return h._residual(left, right)

    return _run(trials, body, tol)


def _random_vector_field(st, rng):
    c = rng.normal(size=4)
    amp = rng.uniform(0.0, 1.0)
    k = rng.normal(scale=0.5, size=(4, 4))
    phase = rng.uniform(0, 2 * np.pi, size=4)
    return h.VectorField(st, lambda x: c + amp * np.sin(np.asarray(x) @ k + phase))


def full_ternary_para_associativity(st, sampling, rng, trials, tol=LAW_TOL, ternary=None):
    def body(i):
        xs = [_random_vector_field(st, rng) for _ in range(5)]
        return max(h.full_para_associativity_residuals(*xs, sampling).values())

    return _run(trials, body, tol)


def tau_product_associativity(st, sampling, rng, trials, tol=LAW_TOL, ternary=None):
    def body(i):
        x, y, z = (_random_vector_field(st, rng) for _ in range(3))
        left = h.tau_product(h.tau_product(x, y), z).on(sampling)
        right = h.tau_product(x, h.tau_product(y, z)).on(sampling)
        scale = max(1.0, float(np.abs(left).max()))
        return float(np.abs(left - right).max()) / scale

    return _run(trials, body, tol)


def _random_invertible(rng):
    f = h.random_positive_field(rng)
    if rng.random() < 0.5:
        return h.InvertibleScalarField(lambda x: -np.asarray(f.func(x)))
    return f


def heap_biunitarity(st, sampling, rng, trials, tol=HEAP_TOL, ternary=None):
    def body(i):
        f, g = _random_invertible(rng), _random_invertible(rng)
        gv = g.on(sampling)
        r1 = np.abs(h.heap_ternary(f, f, g, sampling).on(sampling) - gv) / np.abs(gv)
        r2 = np.abs(h.heap_ternary(g, f, f, sampling).on(sampling) - gv) / np.abs(gv)
        return float(max(r1.max(), r2.max()))

    return _run(trials, body, tol)


def heap_para_associativity(st, sampling, rng, trials, tol=HEAP_TOL, ternary=None):
    def body(i):
        a, b, c, d, e = (_random_invertible(rng) for _ in range(5))
        t = h.heap_ternary
        left = t(t(a, b, c), d, e).on(sampling)
        middle = t(a, t(d, c, b), e).on(sampling)
        right = t(a, b, t(c, d, e)).on(sampling)
        return float(max(np.max(np.abs(left - middle) / np.abs(left)),
                         np.max(np.abs(middle - right) / np.abs(left))))

    return _run(trials, body, tol)


def module_distribution(st, sampling, rng, trials, tol=LAW_TOL, ternary=None):
    us = h.random_sections(st, rng, 3 * trials, prefetch=sampling)

    def body(i):
        u, v, w = us[3 * i:3 * i + 3]
        return h.module_distribution_check(h.random_positive_field(rng), u, v, w, sampling)

    return _run(trials, body, tol)


def heap_semiheap_distribution(st, sampling, rng, trials, tol=LAW_TOL, ternary=None):
    us = h.random_sections(st, rng, 3 * trials, prefetch=sampling)

    def body(i):
        u, v, w = us[3 * i:3 * i + 3]
        f1, f2, f3 = (h.random_positive_field(rng) for _ in range(3))
        return h.heap_semiheap_distribution_check(f1, f2, f3, u, v, w, sampling)

    return _run(trials, body, tol)


SUITES = {
    "para_associativity": para_associativity,
    "fibrewise_para_associativity": fibrewise_para_associativity,
    "closure": closure,
    "partiality_gate": partiality_gate,
    "fixed_binary_associativity": fixed_binary_associativity,
    "full_ternary_para_associativity": full_ternary_para_associativity,
    "tau_product_associativity": tau_product_associativity,
    "heap_biunitarity": heap_biunitarity,
    "heap_para_associativity": heap_para_associativity,
    "module_distribution": module_distribution,
    "heap_semiheap_distribution": heap_semiheap_distribution,
}

_DEFAULT_TOLS = {
    "closure": CLOSURE_TOL,
    "partiality_gate": 0.0,
    "heap_biunitarity": HEAP_TOL,
    "heap_para_associativity": HEAP_TOL,
}


def run_suite(name: str, st: Spacetime, seed: int, trials: int, tol: float | None = None,
              sampling: SamplingSet | None = None, ternary=h.ternary) -> LawReport:
    suite = SUITES[name]
    index = list(SUITES).index(name)
    rng = np.random.default_rng([seed, index])
    if sampling is None:
        sampling = default_sampling(st)
    if tol is None:
        tol = _DEFAULT_TOLS.get(name, LAW_TOL)
    failures, worst = suite(st, sampling, rng, trials, tol, ternary=ternary)
    return LawReport(f"{st.name}:{name}", trials, failures, worst, seed, tol)


def verify_laws(st: Spacetime, seed: int, trials: int, tol: float | None = None,
                suites=None, ternary=h.ternary) -> list:
    names = list(SUITES) if suites is None else list(suites)
    return [run_suite(n, st, seed, trials, tol if n not in _DEFAULT_TOLS else None,
                      ternary=ternary) for n in names]


def reports_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n"
