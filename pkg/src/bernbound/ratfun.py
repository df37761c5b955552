"""Rational functions in partial-fraction form.

A function is a sum of pole terms sum_k c_k (u - a)^{-k} plus a polynomial
part; the polynomial carries the pole-at-infinity data.  Degree is the total
pole count with multiplicity: sum of finite orders plus polynomial degree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import (TWO_PI, INFINITY, AnalyticCurve, ArcOpenUp, arc_samples,
                     curve_samples, distance_to_curve, is_infinite,
                     point_in_curve)
from .errors import PoleError, QuadratureError

POLE_FLOOR = 1e-9
_CLUSTER_TOL = 1e-12


@dataclass(frozen=True)
class PoleTerm:
    location: complex
    coeffs: tuple  # (c_1, ..., c_m): c_k multiplies (u - location)^{-k}

    @property
    def order(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class RationalFunction:
    terms: tuple  # PoleTerm entries, pairwise distinct locations
    poly: tuple = ()  # ascending power coefficients; () means zero


def make_rational(terms, poly=()) -> RationalFunction:
    """Validated constructor: distinct pole locations, nonzero top
    coefficients (exact-zero tails trimmed), trimmed polynomial part."""
    clean = []
    for item in terms:
        term = item if isinstance(item, PoleTerm) else PoleTerm(
            complex(item[0]), tuple(complex(c) for c in item[1]))
        coeffs = list(term.coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            continue
        clean.append(PoleTerm(complex(term.location), tuple(coeffs)))
    locs = [t.location for t in clean]
    for i in range(len(locs)):
        for j in range(i + 1, len(locs)):
            if abs(locs[i] - locs[j]) <= _CLUSTER_TOL * (1 + abs(locs[i])):
                raise PoleError(f"duplicate pole location {locs[i]}")
    p = [complex(c) for c in poly]
    while p and p[-1] == 0:
        p.pop()
    return RationalFunction(tuple(clean), tuple(p))


def poly_degree(f: RationalFunction) -> int:
    return max(len(f.poly) - 1, 0)


def degree(f: RationalFunction) -> int:
    return sum(t.order for t in f.terms) + poly_degree(f)


def poles_of(f: RationalFunction):
    """(location, order) pairs; the polynomial part reports as a pole at
    infinity of order equal to its degree."""
    out = [(t.location, t.order) for t in f.terms]
    if poly_degree(f) >= 1:
        out.append((INFINITY, poly_degree(f)))
    return tuple(out)


def _pole_guard(f, uarr):
    for t in f.terms:
        if np.min(np.abs(uarr - t.location)) < POLE_FLOOR:
            raise PoleError(f"evaluation within the pole floor of {t.location}")


def rf_eval(f: RationalFunction, u):
    uarr = np.asarray(u, dtype=complex)
    scalar = uarr.ndim == 0
    uarr = np.atleast_1d(uarr)
    _pole_guard(f, uarr)
    out = np.zeros(uarr.shape, dtype=complex)
    if f.poly:
        out += f.poly[-1]
        for c in f.poly[-2::-1]:
            out = out * uarr + c
    for t in f.terms:
        d = uarr - t.location
        acc = np.zeros_like(d)
        for c in t.coeffs[::-1]:
            acc = (acc + c) / d
        out = out + acc
    return complex(out[0]) if scalar else out


def rf_derivative(f: RationalFunction, u):
    uarr = np.asarray(u, dtype=complex)
    scalar = uarr.ndim == 0
    uarr = np.atleast_1d(uarr)
    _pole_guard(f, uarr)
    out = np.zeros(uarr.shape, dtype=complex)
    if len(f.poly) > 1:
        n = len(f.poly) - 1
        out += n * f.poly[-1]
        for k in range(n - 1, 0, -1):
            out = out * uarr + k * f.poly[k]
    for t in f.terms:
        d = uarr - t.location
        acc = np.zeros_like(d)
        for k in range(t.order, 0, -1):
            acc = (acc + k * t.coeffs[k - 1]) / d
        out = out - acc / d
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Blaschke products
# ---------------------------------------------------------------------------

def blaschke_eval(points, v):
    """Product-form evaluation of prod B(a, v), B(a, v) = (1 - conj(a) v)/(v - a);
    a point at infinity contributes a factor v.  Stable for any multiplicity."""
    varr = np.asarray(v, dtype=complex)
    scalar = varr.ndim == 0
    varr = np.atleast_1d(varr)
    out = np.ones(varr.shape, dtype=complex)
    for a in points:
        if is_infinite(a):
            out = out * varr
        else:
            a = complex(a)
            out = out * (1.0 - np.conj(a) * varr) / (varr - a)
    return complex(out[0]) if scalar else out


def blaschke_derivative(points, v):
    """Derivative of the product via its logarithmic derivative.

    Safe wherever the product is nonzero; on the unit circle every factor
    has modulus one, so boundary evaluation is always in that regime."""
    varr = np.asarray(v, dtype=complex)
    scalar = varr.ndim == 0
    varr = np.atleast_1d(varr)
    logd = np.zeros(varr.shape, dtype=complex)
    for a in points:
        if is_infinite(a):
            logd = logd + 1.0 / varr
        else:
            a = complex(a)
            logd = logd - np.conj(a) / (1.0 - np.conj(a) * varr) - 1.0 / (varr - a)
    out = blaschke_eval(points, varr) * logd
    return complex(out[0]) if scalar else out


def cluster_points(points, tol=_CLUSTER_TOL):
    """Group near-coincident points into (center, multiplicity) pairs,
    preserving first-appearance order."""
    centers, members = [], []
    for p in points:
        p = complex(p)
        for i, c in enumerate(centers):
            if abs(p - c) <= tol * (1.0 + abs(c)):
                members[i].append(p)
                centers[i] = sum(members[i]) / len(members[i])
                break
        else:
            centers.append(p)
            members.append([p])
    return [(centers[i], len(members[i])) for i in range(len(centers))]


def blaschke_product(points) -> RationalFunction:
    """Finite Blaschke product over the given poles, in partial-fraction form.

    All points must lie strictly on one side of the unit circle (infinity
    counts as exterior); the coefficient arithmetic is done by
    principal_parts applied to the product evaluator."""
    pts = [complex(p) if not is_infinite(p) else INFINITY for p in points]
    if not pts:
        raise PoleError("a Blaschke product needs at least one pole")
    finite = [p for p in pts if not is_infinite(p)]
    n_inf = len(pts) - len(finite)
    for p in finite:
        if abs(abs(p) - 1.0) <= POLE_FLOOR:
            raise PoleError(f"Blaschke pole {p} lies on the unit circle")
    inside = [p for p in finite if abs(p) < 1.0]
    if inside and (len(inside) < len(finite) or n_inf):
        raise PoleError("Blaschke poles must all lie on one side of the circle")

    if not finite:
        return make_rational((), (0j,) * n_inf + (1 + 0j,))

    clustered = cluster_points(finite)
    pp = principal_parts(lambda v: blaschke_eval(pts, v), clustered)

    if n_inf == 0:
        const = complex(np.prod([-np.conj(a) for a in finite]))
        poly = (const,) if const != 0 else ()
    else:
        # polynomial part of degree n_inf via Laurent coefficients at infinity
        big = 2.0 * max(abs(a) for a in finite) + 2.0
        q = 512
        phis = np.arange(q) * (TWO_PI / q)
        ring = big * np.exp(1j * phis)
        vals = blaschke_eval(pts, ring)
        poly = tuple(complex(np.mean(vals * np.exp(-1j * k * phis)) / big ** k)
                     for k in range(n_inf + 1))
    return make_rational(pp.terms, poly)


# ---------------------------------------------------------------------------
# principal parts by contour quadrature
# ---------------------------------------------------------------------------

def _laurent_peel(g, a, order, rho, q):
    """Coefficients c_1..c_order at pole a by trapezoid quadrature on
    |u - a| = rho, peeling from the top order down so that the huge
    top-order contribution never swamps the low-order means."""
    phis = np.arange(q) * (TWO_PI / q)
    nodes = a + rho * np.exp(1j * phis)
    vals = np.asarray(g(nodes), dtype=complex).copy()
    coeffs = np.zeros(order, dtype=complex)
    for k in range(order, 0, -1):
        c = rho ** k * np.mean(vals * np.exp(1j * k * phis))
        coeffs[k - 1] = c
        vals -= c / (nodes - a) ** k
    return coeffs


def principal_parts(g, poles, curve: AnalyticCurve | None = None,
                    q: int = 64, rel_tol: float = 1e-9) -> RationalFunction:
    """Sum of principal parts of g at the given (location, order) poles.

    g must be a vectorized callable, analytic in a punctured neighborhood of
    each pole.  Each quadrature runs at q and 2q nodes; disagreement beyond
    rel_tol (relative to the largest coefficient) raises, and the 2q result
    is returned otherwise."""
    locs = [complex(a) for a, _ in poles]
    orders = [int(m) for _, m in poles]
    if any(m < 1 for m in orders):
        raise PoleError("pole orders must be at least 1")
    terms = []
    worst = 0.0
    for i, (a, m) in enumerate(zip(locs, orders)):
        d_other = min((abs(a - b) for j, b in enumerate(locs) if j != i),
                      default=math.inf)
        d_curve = distance_to_curve(curve, a) if curve is not None else math.inf
        rho = min(d_other, d_curve, 0.5) / 2.0
        if not rho > 1e-8:
            raise QuadratureError(
                f"no feasible quadrature radius at pole {a} (rho = {rho:.2e})")
        c1 = _laurent_peel(g, a, m, rho, q)
        c2 = _laurent_peel(g, a, m, rho, 2 * q)
        scale = max(float(np.max(np.abs(c2))), 1e-300)
        disagree = float(np.max(np.abs(c1 - c2))) / scale
        worst = max(worst, disagree)
        if disagree > rel_tol:
            raise QuadratureError(
                f"quadrature disagreement {disagree:.2e} at pole {a} "
                f"exceeds {rel_tol:.2e}")
        keep = np.abs(c2) > 1e-13 * scale
        top = int(np.nonzero(keep)[0][-1]) + 1 if np.any(keep) else 0
        if top:
            terms.append((a, tuple(c2[:top])))
    return make_rational(terms, ())


# ---------------------------------------------------------------------------
# sup norm on a curve or arc
# ---------------------------------------------------------------------------

def _boundary_samples(boundary, m):
    if isinstance(boundary, ArcOpenUp):
        return arc_samples(boundary, m)
    return curve_samples(boundary, m)


def sup_norm(f: RationalFunction, boundary, m: int | None = None):
    """(max |f| on the boundary, parameter of the argmax).

    Dense sampling at M >= max(4096, 64 deg f) plus parabolic refinement of
    every local maximum, re-evaluating |f| at each refined parameter; no
    global-optimality certificate beyond that resolution."""
    M = int(m) if m else max(4096, 64 * max(degree(f), 1))
    ts, pts = _boundary_samples(boundary, M)
    for t in f.terms:
        if np.min(np.abs(pts - t.location)) < POLE_FLOOR:
            raise PoleError(f"pole {t.location} within the floor distance "
                            "of the boundary")
    vals = np.abs(rf_eval(f, pts))
    is_max = (vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1))
    h = TWO_PI / M
    best_v = -math.inf
    best_t = 0.0
    for i in np.nonzero(is_max)[0]:
        y1, y2, y3 = vals[i - 1], vals[i], vals[(i + 1) % M]
        denom = y1 - 2.0 * y2 + y3
        off = 0.0
        if abs(denom) > 1e-300:
            off = float(np.clip(0.5 * h * (y1 - y3) / denom, -h, h))
        t_ref = float(ts[i]) + off
        _, p_ref = _boundary_samples_at(boundary, t_ref)
        y_ref = float(np.abs(rf_eval(f, p_ref)))
        cand = max(float(y2), y_ref)
        cand_t = t_ref if y_ref >= y2 else float(ts[i])
        if cand > best_v:
            best_v, best_t = cand, cand_t
    return best_v, best_t % TWO_PI


def _boundary_samples_at(boundary, t):
    if isinstance(boundary, ArcOpenUp):
        from .curves import arc_point
        return t, complex(arc_point(boundary, t))
    from .curves import eval_curve
    return t, complex(eval_curve(boundary, t))


# ---------------------------------------------------------------------------
# inside/outside splitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoleSet:
    """Pole locations with multiplicities, classified against a curve."""

    poles: tuple       # ((location, multiplicity), ...)
    inside: tuple      # bool per entry; infinity is always outside
    separation: float  # min distance from the finite poles to the curve

    def expanded(self):
        """(location, inside) repeated per multiplicity."""
        out = []
        for (a, m), inn in zip(self.poles, self.inside):
            out.extend([(a, inn)] * m)
        return out

    @property
    def inner_count(self) -> int:
        return sum(m for (_, m), inn in zip(self.poles, self.inside) if inn)

    @property
    def outer_count(self) -> int:
        return sum(m for (_, m), inn in zip(self.poles, self.inside) if not inn)


def classify_poles(poles, curve: AnalyticCurve) -> PoleSet:
    """Classify (location, multiplicity) pairs by the winding-number test."""
    entries, inside = [], []
    sep = math.inf
    for a, m in poles:
        m = int(m)
        if m < 1:
            raise PoleError("multiplicities must be at least 1")
        if is_infinite(a):
            entries.append((INFINITY, m))
            inside.append(False)
            continue
        a = complex(a)
        d = distance_to_curve(curve, a)
        if d < POLE_FLOOR:
            raise PoleError(f"pole {a} lies on the curve (distance {d:.2e})")
        sep = min(sep, d)
        entries.append((a, m))
        inside.append(point_in_curve(curve, a))
    return PoleSet(tuple(entries), tuple(inside), sep)


def split_inside_outside(f: RationalFunction, curve: AnalyticCurve):
    """f = f1 + f2 with f1 carrying exactly the interior pole terms and
    f1(inf) = 0; f2 gets the rest including the polynomial part."""
    f1_terms, f2_terms = [], []
    for t in f.terms:
        d = distance_to_curve(curve, t.location)
        if d < POLE_FLOOR:
            raise PoleError(f"pole {t.location} on the curve cannot be split")
        (f1_terms if point_in_curve(curve, t.location) else f2_terms).append(t)
    return (make_rational(f1_terms, ()), make_rational(f2_terms, f.poly))
