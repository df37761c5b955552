"""Analytic Jordan curves, boundary geometry, and arcs with open-up maps.

A closed curve is a trigonometric polynomial

    gamma(t) = sum_{k=-K..K} c_k e^{ikt},   t in [0, 2*pi),

stored by its coefficient vector.  Positive orientation means the bounded
component sits on the left of gamma'(t).  An arc is represented indirectly:
a base curve together with a degree-2 rational "open-up" map F that sends
both sides of the base curve onto the complement of the arc.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ArcError, CurveError

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# closed curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnalyticCurve:
    """Trigonometric-polynomial curve. ``coeffs[order + k]`` holds c_k."""

    coeffs: tuple
    kind: str = "trig"
    params: tuple = ()

    @property
    def order(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def coeff(self, k: int) -> complex:
        return self.coeffs[self.order + k]


def circle(radius: float = 1.0, center: complex = 0j) -> AnalyticCurve:
    if radius <= 0:
        raise CurveError("circle radius must be positive")
    return AnalyticCurve((0j, complex(center), complex(radius)), kind="circle",
                         params=(float(radius), complex(center)))


def ellipse(a: float, b: float) -> AnalyticCurve:
    """Axis-aligned ellipse a*cos(t) + i*b*sin(t), centered at the origin."""
    if a <= 0 or b <= 0:
        raise CurveError("ellipse semi-axes must be positive")
    cp = complex((a + b) / 2.0)
    cm = complex((a - b) / 2.0)
    return AnalyticCurve((cm, 0j, cp), kind="ellipse", params=(float(a), float(b)))


def trig_curve(pairs) -> AnalyticCurve:
    """Build a curve from (k, c_k) pairs; missing coefficients are zero."""
    pairs = [(int(k), complex(c)) for k, c in pairs]
    if not pairs:
        raise CurveError("empty coefficient list")
    kmax = max(abs(k) for k, _ in pairs)
    coeffs = [0j] * (2 * kmax + 1)
    for k, c in pairs:
        coeffs[kmax + k] += c
    return AnalyticCurve(tuple(coeffs))


def _coeff_array(curve: AnalyticCurve):
    return np.asarray(curve.coeffs, dtype=complex)


def eval_curve(curve: AnalyticCurve, t):
    """gamma(t); t may be a scalar or an array."""
    tarr = np.asarray(t, dtype=float)
    ks = np.arange(-curve.order, curve.order + 1)
    vals = np.exp(1j * np.multiply.outer(tarr, ks)) @ _coeff_array(curve)
    return vals if tarr.ndim else complex(vals)


def curve_derivative(curve: AnalyticCurve, t, order: int = 1):
    """d^order/dt^order of gamma at t."""
    tarr = np.asarray(t, dtype=float)
    ks = np.arange(-curve.order, curve.order + 1)
    weights = (1j * ks) ** order * _coeff_array(curve)
    vals = np.exp(1j * np.multiply.outer(tarr, ks)) @ weights
    return vals if tarr.ndim else complex(vals)


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the curve with its two unit normals.

    n1 points into the bounded side (for positive orientation), n2 = -n1.
    """

    t: float
    point: complex
    n1: complex
    n2: complex


def unit_normals(curve: AnalyticCurve, t):
    """(n1, n2) at parameter t.  n1 = i * gamma'/|gamma'|."""
    d = curve_derivative(curve, t)
    speed = np.abs(d)
    if np.any(speed < 1e-12):
        raise CurveError(f"degenerate tangent at t={t}")
    n1 = 1j * d / speed
    return n1, -n1


def boundary_point(curve: AnalyticCurve, t: float) -> BoundaryPoint:
    n1, n2 = unit_normals(curve, t)
    return BoundaryPoint(float(t), complex(eval_curve(curve, t)), complex(n1), complex(n2))


def curve_samples(curve: AnalyticCurve, m: int):
    ts = np.arange(m) * (TWO_PI / m)
    return ts, eval_curve(curve, ts)


def winding_number(curve: AnalyticCurve, z: complex, m: int = 2048) -> int:
    """Winding of gamma about z via the trapezoid rule (spectrally exact)."""
    ts, pts = curve_samples(curve, m)
    dif = pts - z
    if np.min(np.abs(dif)) < 1e-9:
        raise CurveError(f"point {z} is on (or too close to) the curve")
    w = np.mean(curve_derivative(curve, ts) / dif) / 1j
    wr = float(w.real)
    if abs(wr - round(wr)) > 0.1 or abs(w.imag) > 0.1:
        raise CurveError(f"ambiguous winding number {w} about {z}")
    return int(round(wr))


def point_in_curve(curve: AnalyticCurve, z: complex, m: int = 2048) -> bool:
    return winding_number(curve, z, m) != 0


def distance_to_curve(curve: AnalyticCurve, z: complex, m: int = 4096) -> float:
    """Sampled distance from z to the curve (lower-resolution but adequate
    for radius budgets; callers halve it anyway)."""
    _, pts = curve_samples(curve, m)
    return float(np.min(np.abs(pts - z)))


@dataclass(frozen=True)
class CurveReport:
    grid: int
    speed_min: float
    simplicity_margin: float
    winding: int
    speed_ok: bool
    simple_ok: bool
    orientation_ok: bool

    @property
    def ok(self) -> bool:
        return self.speed_ok and self.simple_ok and self.orientation_ok


def _simplicity_margin(pts, step_scale):
    """min distance between far-apart samples, in units of 1.5 grid steps.

    A transversal self-crossing puts samples of the two branches within one
    grid step of each other, so a margin below 1 flags the curve; genuinely
    simple curves keep a fixed geometric separation and the margin grows
    linearly under grid refinement.
    """
    m = len(pts)
    floor = 1.5 * step_scale
    skip = max(4, m // 16)
    best = np.inf
    for off in range(skip, m - skip + 1):
        d = np.min(np.abs(pts - np.roll(pts, off)))
        best = min(best, d)
    return best / floor


def validate_curve(curve: AnalyticCurve, m: int = 1024) -> CurveReport:
    """Grid checks: nonvanishing speed, sampled simplicity, winding +1."""
    if m < 64:
        raise CurveError("validation grid must have at least 64 points")
    ts, pts = curve_samples(curve, m)
    speeds = np.abs(curve_derivative(curve, ts))
    speed_min = float(np.min(speeds))
    speed_ok = speed_min > 1e-9 * float(np.max(speeds))

    margin = _simplicity_margin(pts, float(np.max(speeds)) * TWO_PI / m)
    simple_ok = bool(margin > 1.0)

    z_ref = complex(np.mean(pts))
    try:
        wind = winding_number(curve, z_ref, m)
    except CurveError:
        wind = 0
    orientation_ok = wind == 1

    return CurveReport(m, speed_min, float(margin), wind,
                       bool(speed_ok), simple_ok, orientation_ok)


def param_of_point(curve: AnalyticCurve, u: complex, m: int = 2048) -> float:
    """Parameter of a point lying on the curve (nearest-sample + Newton)."""
    if curve.kind == "circle":
        r, c = curve.params
        return float(np.angle(u - c) % TWO_PI)
    ts, pts = curve_samples(curve, m)
    t = float(ts[int(np.argmin(np.abs(pts - u)))])
    for _ in range(40):
        g = eval_curve(curve, t) - u
        dg = curve_derivative(curve, t)
        step = (g * dg.conjugate()).real / abs(dg) ** 2
        t -= step
        if abs(step) < 1e-14:
            break
    if abs(eval_curve(curve, t) - u) > 1e-8 * (1 + abs(u)):
        raise CurveError(f"{u} does not lie on the curve")
    return t % TWO_PI


# ---------------------------------------------------------------------------
# arcs via open-up maps
# ---------------------------------------------------------------------------

INFINITY = complex(math.inf, 0.0)


def is_infinite(z) -> bool:
    z = complex(z)
    return not (math.isfinite(z.real) and math.isfinite(z.imag))


@dataclass(frozen=True)
class RationalQuad:
    """F(u) = (n0 + n1 u + n2 u^2) / (d0 + d1 u + d2 u^2)."""

    num: tuple
    den: tuple


def rq_eval(F: RationalQuad, u):
    uarr = np.asarray(u, dtype=complex)
    n0, n1, n2 = F.num
    d0, d1, d2 = F.den
    vals = (n0 + uarr * (n1 + uarr * n2)) / (d0 + uarr * (d1 + uarr * d2))
    return vals if uarr.ndim else complex(vals)


def rq_derivative(F: RationalQuad, u):
    uarr = np.asarray(u, dtype=complex)
    n0, n1, n2 = F.num
    d0, d1, d2 = F.den
    num = n0 + uarr * (n1 + uarr * n2)
    den = d0 + uarr * (d1 + uarr * d2)
    dnum = n1 + 2 * n2 * uarr
    dden = d1 + 2 * d2 * uarr
    vals = (dnum * den - num * dden) / den ** 2
    return vals if uarr.ndim else complex(vals)


def _poly_roots(c2, c1, c0):
    """Roots of c2 u^2 + c1 u + c0, padding with INFINITY as the degree drops."""
    scale = max(abs(c2), abs(c1), abs(c0))
    if scale == 0:
        raise ArcError("degenerate equation while solving the open-up map")
    tol = 1e-14 * scale
    if abs(c2) <= tol:
        if abs(c1) <= tol:
            return [INFINITY, INFINITY]
        return [-c0 / c1, INFINITY]
    roots = np.roots([c2, c1, c0])
    return [complex(r) for r in roots]


def rq_solve(F: RationalQuad, z):
    """All u with F(u) = z, infinity included on both sides."""
    n0, n1, n2 = F.num
    d0, d1, d2 = F.den
    if is_infinite(z):
        return _poly_roots(d2, d1, d0)
    return _poly_roots(n2 - z * d2, n1 - z * d1, n0 - z * d0)


@dataclass(frozen=True)
class ArcOpenUp:
    """An arc described by a base curve and its 2:1 open-up map.

    F maps both the interior and the exterior of `curve` conformally onto
    the complement of the arc; z0 is a reference interior point of the arc
    kept for validation.
    """

    curve: AnalyticCurve
    fmap: RationalQuad
    z0: complex


def segment_arc(za: complex = -1.0, zb: complex = 1.0) -> ArcOpenUp:
    """Straight segment [za, zb] opened up by a scaled Joukowski map."""
    za, zb = complex(za), complex(zb)
    if za == zb:
        raise ArcError("segment endpoints coincide")
    c = (za + zb) / 2.0
    s = (zb - za) / 2.0
    # c + s*(u + 1/u)/2 = (s u^2 + 2 c u + s) / (2 u)
    F = RationalQuad((s, 2 * c, s), (0j, 2 + 0j, 0j))
    return ArcOpenUp(circle(), F, c)


def circular_arc(theta0: float, radius: float = 1.0, center: complex = 0j,
                 rotation: float = 0.0) -> ArcOpenUp:
    """Arc of a circle subtending angles [-theta0, theta0] (then rotated).

    Built as a Moebius-conjugated Joukowski map: J takes the unit circle to
    [-1, 1] and the Moebius factor carries [-1, 1] back onto the arc.
    """
    if not 0 < theta0 < math.pi:
        raise ArcError("theta0 must lie in (0, pi)")
    tau = math.tan(theta0 / 2.0)
    # mu^{-1}(w) = (i - tau w)/(i + tau w) maps [-1,1] onto the unit-circle arc
    # |phi| <= theta0; conjugate with J(u) = (u^2+1)/(2u).
    num = (-tau + 0j, 2j, -tau + 0j)
    den = (tau + 0j, 2j, tau + 0j)
    rot = cmath.exp(1j * rotation) * radius
    # post-compose with the similarity center + rot * w
    n = tuple(center * d + rot * nn for nn, d in zip(num, den))
    F = RationalQuad(n, den)
    return ArcOpenUp(circle(), F, center + rot)


def arc_point(arc: ArcOpenUp, t):
    """Point of the arc reached from base-curve parameter t."""
    return rq_eval(arc.fmap, eval_curve(arc.curve, t))


def arc_samples(arc: ArcOpenUp, m: int):
    ts = np.arange(m) * (TWO_PI / m)
    return ts, rq_eval(arc.fmap, eval_curve(arc.curve, ts))


def arc_endpoints(arc: ArcOpenUp):
    """Endpoints = critical values of F on the base curve."""
    n0, n1, n2 = arc.fmap.num
    d0, d1, d2 = arc.fmap.den
    # numerator of F' is a quadratic: (n'd - nd') with the u^3 terms cancelling
    c2 = n2 * d1 - n1 * d2
    c1 = 2 * (n2 * d0 - n0 * d2)
    c0 = n1 * d0 - n0 * d1
    roots = [r for r in _poly_roots(c2, c1, c0) if not is_infinite(r)]
    ends = [complex(rq_eval(arc.fmap, r)) for r in roots
            if abs(abs(r) - 1.0) < 1e-9]
    if len(ends) != 2:
        raise ArcError("open-up map must have exactly two critical points on the base curve")
    return ends[0], ends[1]


def distance_to_arc(arc: ArcOpenUp, z: complex, m: int = 4096) -> float:
    _, pts = arc_samples(arc, m)
    return float(np.min(np.abs(pts - z)))


@dataclass(frozen=True)
class OpenUpReport:
    preimage_residual: float
    critical_min: float
    injectivity_ok: bool

    @property
    def ok(self) -> bool:
        return (self.preimage_residual < 1e-9 and self.critical_min > 1e-12
                and self.injectivity_ok)


def validate_openup(arc: ArcOpenUp, m: int = 48) -> OpenUpReport:
    """Sampled sanity checks for the open-up structure."""
    from .conformal import openup_preimages  # local import to avoid a cycle

    u1, u2 = openup_preimages(arc, arc.z0)
    res = max(abs(rq_eval(arc.fmap, u1) - arc.z0),
              abs(rq_eval(arc.fmap, u2) - arc.z0))
    crit = min(abs(rq_derivative(arc.fmap, u1)), abs(rq_derivative(arc.fmap, u2)))

    # injectivity of F on a sampled interior grid
    rads = np.linspace(0.15, 0.9, 6)
    angs = np.arange(m) * (TWO_PI / m)
    grid = (rads[:, None] * np.exp(1j * angs)[None, :]).ravel()
    vals = rq_eval(arc.fmap, grid)
    vals = vals[np.isfinite(vals.real) & np.isfinite(vals.imag)]
    inj = True
    scale = float(np.max(np.abs(vals))) + 1.0
    for i in range(len(vals)):
        d = np.abs(vals[i + 1:] - vals[i])
        if d.size and np.min(d) < 1e-10 * scale:
            inj = False
            break
    return OpenUpReport(float(res), float(crit), inj)
