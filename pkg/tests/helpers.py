"""Shared corpus builders used by both the test suite and tools/gen_golden.py.

Everything here is deterministic given the RNG state passed in; the golden
files freeze the outputs of these builders for regression comparison.
"""

import numpy as np

from bernbound import INFINITY, blaschke_product, make_rational

DEFAULT_SEED = 1729

# Fixed pole set for the ellipse regression corpus: two interior points,
# one exterior point, and the point at infinity (polynomial part).
CORPUS_INTERIOR = (complex(-0.3, 0.25), complex(0.45, 0.0))
CORPUS_EXTERIOR = (complex(1.9, -0.6),)
CORPUS_MAX_ORDER = 3
CORPUS_SIZE = 200


def random_complex(rng, n=None):
    """Standard complex normal draws (re and im independent N(0,1))."""
    if n is None:
        return complex(rng.standard_normal(), rng.standard_normal())
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def random_corpus_function(rng):
    """One random rational with poles confined to the fixed corpus set.

    Each finite pole and the polynomial part independently receive an
    order in 0..CORPUS_MAX_ORDER (0 = absent); the draw is rejected and
    retried if everything came out absent.  Coefficients are complex
    normal.  Returns (function, orders) with orders listed in the fixed
    pole order (interior..., exterior..., infinity).
    """
    candidates = CORPUS_INTERIOR + CORPUS_EXTERIOR
    while True:
        orders = [int(rng.integers(0, CORPUS_MAX_ORDER + 1))
                  for _ in range(len(candidates) + 1)]
        if any(orders):
            break
    terms = []
    for pole, order in zip(candidates, orders[:-1]):
        if order:
            terms.append((pole, tuple(random_complex(rng, order))))
    poly = ()
    if orders[-1]:
        poly = tuple(random_complex(rng, orders[-1] + 1))
    return make_rational(terms, poly), orders


def random_blaschke(rng, max_factors=20, outside=False):
    """Random one-sided Blaschke product with 1..max_factors poles.

    Poles are drawn inside the disk (radius in [0.1, 0.85]); with
    ``outside`` they are reflected across the circle so all poles lie
    outside instead.
    """
    n = int(rng.integers(1, max_factors + 1))
    radii = 0.1 + 0.75 * rng.random(n)
    angles = 2.0 * np.pi * rng.random(n)
    points = radii * np.exp(1j * angles)
    if outside:
        points = 1.0 / np.conj(points)
    return blaschke_product(points)


def random_split_rational(rng, curve_points, margin=0.25, max_terms=3):
    """Random rational with poles off a sampled curve, for split tests.

    Draws 1..max_terms finite poles at least ``margin`` away from every
    sample of the curve, plus an optional polynomial part, so the
    interior/exterior split is well conditioned.  Half the draws aim at
    the interior so both sides of the split carry poles routinely.
    """
    pts = np.asarray(curve_points)
    center = pts.mean()
    scale = np.max(np.abs(pts - center))
    terms = []
    n_terms = int(rng.integers(1, max_terms + 1))
    while len(terms) < n_terms:
        spread = 0.5 if rng.random() < 0.5 else 3.0
        z = center + spread * scale * random_complex(rng)
        if np.min(np.abs(pts - z)) < margin * scale:
            continue
        order = int(rng.integers(1, 4))
        terms.append((z, tuple(random_complex(rng, order))))
    poly = ()
    if rng.random() < 0.5:
        poly = tuple(random_complex(rng, int(rng.integers(1, 4))))
    if not poly and not terms:
        terms.append((center + 3.0 * scale, (1.0 + 0.0j,)))
    return make_rational(terms, poly)


def sweep_interior_poles(cfg):
    """Interior pole ring for the sharpness sweep, from a golden config.

    The poles sit on a scaled copy of the ellipse, angularly spread so
    the transplanted partial-fraction coefficients stay small.
    """
    thetas = cfg["ring_phase"] + 2.0 * np.pi * np.arange(cfg["ring_count"]) \
        / cfg["ring_count"]
    return [complex(cfg["ring_scale"] * cfg["a"] * np.cos(th),
                    cfg["ring_scale"] * cfg["b"] * np.sin(th))
            for th in thetas]


def corpus_pole_spec():
    """The fixed corpus pole set in run-spec form (orders filled per item)."""
    spec = [{"point": [p.real, p.imag]} for p in CORPUS_INTERIOR]
    spec += [{"point": [p.real, p.imag]} for p in CORPUS_EXTERIOR]
    spec.append({"point": "inf"})
    return spec


def assert_pole_set(function, allowed):
    """True if every pole of ``function`` lies in the allowed set."""
    allowed = list(allowed)
    for pole, _ in function.terms:
        if not any(abs(pole - a) < 1e-12 for a in allowed
                   if a is not INFINITY and not isinstance(a, str)):
            return False
    return True
