"""Riemann maps for both sides of an analytic curve, anchored at a boundary point.

The interior map Phi1 : D -> G1 and exterior map Phi2 : D* -> G2 are both
normalized so that Phi(1) = u0 and |Phi'(1)| = 1.  Each map is stored as a
core series (Taylor about 0, or Laurent about infinity) pre-composed with a
disk automorphism  v -> rot * (v + s)/(1 + s v)  realizing the normalization;
the hyperbolic factor fixes +-1 and scales the boundary derivative by
(1 - s)/(1 + s).

General curves are solved by the Theodorsen boundary-correspondence
iteration on a uniform FFT grid; the exterior problem is first carried to a
bounded one through the plane inversion w = 1/(u - z_c).  Circles get the
exact linear map on both sides, the ellipse exterior the classical
Joukowski-type closed form.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .curves import (TWO_PI, AnalyticCurve, ArcOpenUp, BoundaryPoint,
                     curve_derivative, eval_curve, is_infinite, rq_solve)
from .errors import ArcError, MapError, MapInvertError

_MARGIN_LADDER = tuple(0.02 * 1.25 ** j for j in range(22))
_INF = complex(math.inf, 0.0)
_TRIM_REL = 1e-14


@dataclass(frozen=True)
class ConformalMap:
    side: str              # "interior" | "exterior"
    series: tuple          # core coefficients, see module docstring
    rot: complex           # unit-modulus rotation of the normalization prefix
    s: float               # hyperbolic normalization parameter, |s| < 1
    anchor: complex        # u0 = Phi(1)
    anchor_deriv: complex  # Phi'(1), unit modulus by construction
    corr_t: tuple          # curve parameter at the uniform final angles
    delta: float           # verified extension margin beyond |v| = 1
    tail: float            # relative mass dropped when the series was cut

    @property
    def grid(self) -> int:
        return len(self.corr_t)


@dataclass(frozen=True)
class MapPair:
    curve: AnalyticCurve
    interior: ConformalMap
    exterior: ConformalMap

    @property
    def delta1(self) -> float:
        """Univalence excess of the interior map beyond the closed disk."""
        return self.interior.delta

    @property
    def anchor(self) -> complex:
        return self.interior.anchor


# ---------------------------------------------------------------------------
# evaluation through the normalization prefix
# ---------------------------------------------------------------------------

def _moebius(cmap, v):
    return cmap.rot * (v + cmap.s) / (1.0 + cmap.s * v)


def _moebius_deriv(cmap, v):
    return cmap.rot * (1.0 - cmap.s ** 2) / (1.0 + cmap.s * v) ** 2


def _core_eval(cmap, w):
    c = cmap.series
    if cmap.side == "interior":
        acc = np.full_like(w, c[-1])
        for k in range(len(c) - 2, -1, -1):
            acc = acc * w + c[k]
        return acc
    # exterior core: c[0]*w + c[1] + c[2]/w + c[3]/w^2 + ...
    iw = 1.0 / w
    acc = np.full_like(w, c[-1])
    for k in range(len(c) - 2, 0, -1):
        acc = acc * iw + c[k]
    return acc + c[0] * w


def _core_deriv(cmap, w):
    c = cmap.series
    if cmap.side == "interior":
        acc = np.zeros_like(w)
        for k in range(len(c) - 1, 0, -1):
            acc = acc * w + k * c[k]
        return acc
    iw = 1.0 / w
    acc = np.zeros_like(w)
    for k in range(len(c) - 1, 1, -1):
        acc = acc * iw + (k - 1) * c[k]
    return c[0] - acc * iw * iw


def _domain_limits(cmap):
    d = max(cmap.delta, 0.0)
    if cmap.side == "interior":
        return 0.0, 1.0 + d
    return max(1.0 - d, 1e-12), math.inf


def exterior_pole(cmap: ConformalMap) -> complex:
    """The v in the closed exterior disk with Phi2(v) = infinity."""
    if cmap.side != "exterior":
        raise MapError("only exterior maps carry a pole")
    if cmap.s == 0.0:
        return _INF
    return complex(-1.0 / cmap.s)


def _value_at_infinity(cmap):
    if cmap.s == 0.0:
        return _INF
    w = cmap.rot / cmap.s  # limit of the prefix at v = infinity
    return complex(_core_eval(cmap, np.atleast_1d(complex(w)))[0])


def map_eval(cmap: ConformalMap, v):
    """Phi(v) for scalars or arrays, guarding the verified domain."""
    varr = np.asarray(v, dtype=complex)
    scalar = varr.ndim == 0
    varr = np.atleast_1d(varr).astype(complex)
    inf_mask = ~(np.isfinite(varr.real) & np.isfinite(varr.imag))
    if np.any(inf_mask) and cmap.side != "exterior":
        raise MapError("interior map evaluated at infinity")
    r = np.abs(np.where(inf_mask, 1.0, varr))
    lo, hi = _domain_limits(cmap)
    tol = 1e-12
    if np.any((r < lo - tol) & ~inf_mask) or np.any((r > hi + tol) & ~inf_mask):
        raise MapError(f"evaluation outside the verified {cmap.side} domain")
    out = np.empty(varr.shape, dtype=complex)
    if np.any(inf_mask):
        out[inf_mask] = _value_at_infinity(cmap)
    fin = ~inf_mask
    if np.any(fin):
        out[fin] = _core_eval(cmap, _moebius(cmap, varr[fin]))
    return complex(out[0]) if scalar else out


def map_derivative(cmap: ConformalMap, v):
    varr = np.asarray(v, dtype=complex)
    scalar = varr.ndim == 0
    varr = np.atleast_1d(varr).astype(complex)
    w = _moebius(cmap, varr)
    out = _core_deriv(cmap, w) * _moebius_deriv(cmap, varr)
    return complex(out[0]) if scalar else out


def boundary_values(cmap: ConformalMap):
    """(theta_j, Phi(e^{i theta_j})) on the uniform final grid."""
    thetas = np.arange(cmap.grid) * (TWO_PI / cmap.grid)
    return thetas, map_eval(cmap, np.exp(1j * thetas))


# ---------------------------------------------------------------------------
# Theodorsen machinery
# ---------------------------------------------------------------------------

def _conjugate_periodic(x):
    """Boundary conjugation operator: mode k picks up a factor -i*sign(k)."""
    m = len(x)
    f = np.fft.fft(x)
    mult = np.zeros(m, dtype=complex)
    mult[1:(m + 1) // 2] = -1j
    mult[m // 2 + 1:] = 1j
    return np.real(np.fft.ifft(f * mult))


class _PolarBoundary:
    """Star-shaped boundary about a center: polar radius and curve parameter
    as functions of the polar angle, inverted by table lookup plus Newton."""

    def __init__(self, curve, center, n_dense=8192):
        self.curve = curve
        self.center = complex(center)
        ts = np.arange(n_dense) * (TWO_PI / n_dense)
        rel = eval_curve(curve, ts) - self.center
        if np.min(np.abs(rel)) < 1e-12:
            raise MapError("polar center lies on the curve")
        psi = np.unwrap(np.angle(rel))
        if np.any(np.diff(psi) <= 0):
            raise MapError("curve is not star-shaped about the chosen center")
        self._ts = np.concatenate([ts, [TWO_PI]])
        self._psi = np.concatenate([psi, [psi[0] + TWO_PI]])
        self._psi0 = psi[0]

    def t_of_angle(self, phi):
        phi = np.asarray(phi, dtype=float)
        ph = (phi - self._psi0) % TWO_PI + self._psi0
        t = np.interp(ph, self._psi, self._ts)
        for _ in range(4):
            rel = eval_curve(self.curve, t) - self.center
            err = np.angle(rel * np.exp(-1j * ph))
            slope = np.imag(curve_derivative(self.curve, t) / rel)
            t = t - err / slope
        return t

    def radius_and_t(self, phi):
        t = self.t_of_angle(phi)
        return np.abs(eval_curve(self.curve, t) - self.center), t


def _theodorsen(log_rho, m, tol, max_iter=800):
    """Fixed point of phi = theta + K[log rho(phi)] with adaptive
    under-relaxation; returns phi on the uniform grid and the residual."""
    thetas = np.arange(m) * (TWO_PI / m)
    phi = thetas.copy()
    relax, prev, bad = 1.0, math.inf, 0
    for _ in range(max_iter):
        target = thetas + _conjugate_periodic(log_rho(phi))
        res = float(np.max(np.abs(target - phi)))
        if res < tol:
            return target, res
        if res > prev * 1.02:
            bad += 1
            if bad >= 3:
                relax = max(relax / 2.0, 0.05)
                bad = 0
        prev = res
        phi = (1.0 - relax) * phi + relax * target
    raise MapError("Theodorsen iteration did not converge", residual=prev)


def _trim_series(series, keep_min=8):
    series = np.asarray(series, dtype=complex)
    scale = float(np.max(np.abs(series)))
    if scale == 0.0:
        return series[:keep_min]
    big = np.nonzero(np.abs(series) > _TRIM_REL * scale)[0]
    cut = max(int(big[-1]) + 1, keep_min) if len(big) else keep_min
    return series[:min(cut, len(series))]


def _interior_core(curve, z_c, m, tol):
    """Raw interior map about z_c: series, boundary correspondence, tail."""
    polar = _PolarBoundary(curve, z_c)

    def log_rho(phi):
        return np.log(polar.radius_and_t(phi)[0])

    phi, _ = _theodorsen(log_rho, m, tol * 1e-2)
    rho, t_par = polar.radius_and_t(phi)
    bnd = z_c + rho * np.exp(1j * phi)
    bins = np.fft.fft(bnd) / m
    kmax = m // 2
    series = np.concatenate([[z_c], bins[1:kmax]])
    scale = float(np.max(np.abs(series)))
    err = max(float(np.max(np.abs(bins[kmax:]))), abs(bins[0] - z_c))
    series = _trim_series(series)
    return series, t_par, max(err / scale, _TRIM_REL)


def _exterior_core(curve, z_c, m, tol):
    """Raw exterior map through the inversion w = 1/(u - z_c)."""
    polar = _PolarBoundary(curve, z_c)

    def log_rho_w(phi):
        # inverted boundary: radius 1/rho_u at angle phi, u-angle -phi
        return -np.log(polar.radius_and_t(-np.asarray(phi))[0])

    phi, _ = _theodorsen(log_rho_w, m, tol * 1e-2)
    rho_u, t_par = polar.radius_and_t(-phi)
    wbnd = np.exp(1j * phi) / rho_u
    # Psi(e^{i theta}) = z_c + 1/W(e^{-i theta}); index m-j realizes -theta_j
    w_rev = np.concatenate([wbnd[:1], wbnd[1:][::-1]])
    t_rev = np.concatenate([t_par[:1], t_par[1:][::-1]])
    bins = np.fft.fft(z_c + 1.0 / w_rev) / m
    kmax = m // 2
    series = np.concatenate([bins[1:2], bins[0:1], bins[:kmax:-1]])
    scale = float(np.max(np.abs(series)))
    err = float(np.max(np.abs(bins[2:kmax + 1])))
    series = _trim_series(series)
    return series, t_rev, max(err / scale, _TRIM_REL)


def _closed_exterior_ellipse(a, b):
    return np.array([(a + b) / 2.0, 0.0, (a - b) / 2.0], dtype=complex)


# ---------------------------------------------------------------------------
# normalization and margin measurement
# ---------------------------------------------------------------------------

def _raw_map(side, series, t_par, tail, m):
    if t_par is None:
        t_par = np.arange(m) * (TWO_PI / m)
    return ConformalMap(side, tuple(np.asarray(series, dtype=complex)),
                        1.0 + 0j, 0.0, 0j, 0j,
                        tuple(np.asarray(t_par, dtype=float)), 0.0, float(tail))


def _interp_correspondence(samples, queries):
    """Spectral interpolation of t(theta) = theta + periodic part."""
    m = len(samples)
    thetas = np.arange(m) * (TWO_PI / m)
    per = np.unwrap(np.asarray(samples, dtype=float) - thetas)
    coef = np.fft.fft(per) / m
    ks = np.fft.fftfreq(m, d=1.0 / m).astype(int)
    q = np.asarray(queries, dtype=float)
    vals = np.real(np.exp(1j * np.multiply.outer(q, ks)) @ coef)
    return q + vals


def normalize_at_anchor(raw: ConformalMap, u0: BoundaryPoint) -> ConformalMap:
    """Fix the automorphism freedom: Phi(1) = u0.point, |Phi'(1)| = 1.

    The anchor preimage angle of the core map supplies the rotation; the
    hyperbolic factor (v + s)/(1 + s v) then corrects |Phi'(1)|.
    """
    m = raw.grid
    thetas = np.arange(m) * (TWO_PI / m)
    ring = np.exp(1j * thetas)
    vals = _core_eval(raw, ring)
    theta0 = float(thetas[int(np.argmin(np.abs(vals - u0.point)))])
    uscale = 1.0 + abs(u0.point)
    for _ in range(60):
        w = complex(np.exp(1j * theta0))
        f = complex(_core_eval(raw, np.atleast_1d(w))[0]) - u0.point
        if abs(f) < 1e-14 * uscale:
            break
        d = complex(_core_deriv(raw, np.atleast_1d(w))[0]) * 1j * w
        step = (f / d).real
        theta0 -= step
        if abs(step) < 1e-15:
            break
    w0 = complex(np.exp(1j * theta0))
    resid = abs(complex(_core_eval(raw, np.atleast_1d(w0))[0]) - u0.point)
    if resid > 1e-8 * uscale:
        raise MapError("anchor preimage search failed", residual=resid)

    lam = abs(complex(_core_deriv(raw, np.atleast_1d(w0))[0]))
    if lam <= 0.0:
        raise MapError("vanishing boundary derivative at the anchor")
    s = (lam - 1.0) / (lam + 1.0)
    rot = w0

    # boundary correspondence on the final uniform grid
    core_angle = np.angle(rot * (ring + s) / (1.0 + s * ring))
    t_final = np.mod(_interp_correspondence(np.asarray(raw.corr_t), core_angle),
                     TWO_PI)
    out = replace(raw, rot=rot, s=float(s), corr_t=tuple(t_final))
    return replace(out, anchor=complex(map_eval(out, 1.0 + 0j)),
                   anchor_deriv=complex(map_derivative(out, 1.0 + 0j)))


def _sampled_injective(pts, floor):
    m = len(pts)
    skip = max(4, m // 16)
    for off in range(skip, m - skip + 1):
        if np.min(np.abs(pts - np.roll(pts, off))) < floor:
            return False
    return True


def _measure_margin(cmap: ConformalMap, m: int = 512) -> float:
    """Largest ladder offset at which the analytically continued map still
    passes sampled univalence, derivative, and truncation checks; halved."""
    thetas = np.arange(m) * (TWO_PI / m)
    ring = np.exp(1j * thetas)
    klast = len(cmap.series) - 1
    best = 0.0
    for d in _MARGIN_LADDER:
        if cmap.side == "exterior" and d >= 0.9:
            break
        radius = 1.0 + d if cmap.side == "interior" else 1.0 - d
        probe = replace(cmap, delta=d + 1e-9)
        pts = map_eval(probe, radius * ring)
        if not np.all(np.isfinite(pts.real) & np.isfinite(pts.imag)):
            break
        scale = max(float(np.max(np.abs(pts))), 1.0)
        growth = radius ** klast if cmap.side == "interior" else radius ** (-klast)
        if cmap.tail > _TRIM_REL and cmap.tail * growth > 1e-8 * scale:
            break
        der = map_derivative(probe, radius * ring)
        if np.min(np.abs(der)) < 1e-10 * scale:
            break
        gaps = np.abs(np.diff(np.concatenate([pts, pts[:1]])))
        if not _sampled_injective(pts, 1.5 * float(np.max(gaps))):
            break
        best = d
    return best / 2.0


def _with_margin(cmap):
    return replace(cmap, delta=_measure_margin(cmap))


# ---------------------------------------------------------------------------
# public solvers
# ---------------------------------------------------------------------------

def _interior_center(curve):
    ts = np.arange(512) * (TWO_PI / 512)
    return complex(np.mean(eval_curve(curve, ts)))


def solve_interior_map(curve: AnalyticCurve, u0: BoundaryPoint,
                       tol: float = 1e-11, m: int = 1024) -> ConformalMap:
    """Normalized Riemann map of the open unit disk onto the bounded side."""
    if curve.kind == "circle":
        r, c = curve.params
        series, t_par, tail = np.array([c, r], dtype=complex), None, 0.0
    else:
        series, t_par, tail = _interior_core(curve, _interior_center(curve),
                                             m, tol)
    raw = _raw_map("interior", series, t_par, tail, m)
    return _with_margin(normalize_at_anchor(raw, u0))


def solve_exterior_map(curve: AnalyticCurve, u0: BoundaryPoint,
                       tol: float = 1e-11, m: int = 1024,
                       method: str = "auto") -> ConformalMap:
    """Normalized Riemann map of {|v| > 1} onto the unbounded side.

    method="auto" uses the closed form for circles and ellipses and the
    inversion route otherwise; method="inversion" forces the numerical path
    (handy for cross-validating the closed forms).
    """
    if method not in ("auto", "inversion"):
        raise MapError(f"unknown exterior solve method {method!r}")
    t_par = None
    tail = 0.0
    if method == "auto" and curve.kind == "circle":
        r, c = curve.params
        series = np.array([r, c], dtype=complex)
    elif method == "auto" and curve.kind == "ellipse":
        a, b = curve.params
        series = _closed_exterior_ellipse(a, b)
    else:
        series, t_par, tail = _exterior_core(curve, _interior_center(curve),
                                             m, tol)
    raw = _raw_map("exterior", series, t_par, tail, m)
    return _with_margin(normalize_at_anchor(raw, u0))


def solve_map_pair(curve: AnalyticCurve, u0: BoundaryPoint,
                   tol: float = 1e-11, m: int = 1024) -> MapPair:
    return MapPair(curve, solve_interior_map(curve, u0, tol, m),
                   solve_exterior_map(curve, u0, tol, m))


# ---------------------------------------------------------------------------
# inversion
# ---------------------------------------------------------------------------

def map_invert(cmap: ConformalMap, u, tol: float = 1e-13):
    """Preimage of u under Phi by damped Newton from boundary-sample guesses."""
    if is_infinite(u):
        if cmap.side != "exterior":
            raise MapInvertError("infinity has no interior-map preimage")
        return exterior_pole(cmap)
    u = complex(u)
    m = cmap.grid
    stride = max(1, m // 128)
    vb = np.exp(1j * np.arange(0, m, stride) * (TWO_PI / m))
    ub = map_eval(cmap, vb)
    order = np.argsort(np.abs(ub - u))
    candidates = [complex(vb[order[0]]), complex(vb[order[1]])]
    if cmap.side == "interior" and abs(cmap.series[1]) > 0 and cmap.s == 0.0:
        lin = (u - cmap.series[0]) / (cmap.rot * cmap.series[1])
        if abs(lin) < 1.0:
            candidates.insert(0, complex(lin))
    lo, hi = _domain_limits(cmap)
    hi_clamp = min(hi, 1e6)
    atol = tol * (1.0 + abs(u))
    f = math.inf
    for v0 in candidates:
        v = v0
        f = abs(map_eval(cmap, v) - u)
        for _ in range(80):
            if f < atol:
                return v
            d = map_derivative(cmap, v)
            if d == 0 or not np.isfinite(abs(d)):
                break
            step = (map_eval(cmap, v) - u) / d
            lam = 1.0
            improved = False
            while lam > 2 ** -12:
                vt = v - lam * step
                r = abs(vt)
                if r > hi_clamp:
                    vt *= hi_clamp / r
                elif r < lo:
                    vt *= lo / max(r, 1e-300)
                ft = abs(map_eval(cmap, vt) - u)
                if ft < f:
                    v, f, improved = vt, ft, True
                    break
                lam /= 2.0
            if not improved:
                break
        if f < atol:
            return v
    raise MapInvertError(f"Newton inversion failed for {u}", residual=f)


def roundtrip_residual(cmap: ConformalMap, pts) -> float:
    vals = [abs(map_eval(cmap, map_invert(cmap, complex(u))) - complex(u))
            for u in np.atleast_1d(pts)]
    return float(max(vals))


# ---------------------------------------------------------------------------
# open-up preimages
# ---------------------------------------------------------------------------

def openup_preimages(arc: ArcOpenUp, z0):
    """The two base-circle preimages (u1, u2) of an interior arc point.

    u1 is the preimage with the larger imaginary part (ties broken by larger
    real part); this fixes which arc side each unit normal points into.
    """
    roots = [r for r in rq_solve(arc.fmap, complex(z0)) if not is_infinite(r)]
    if len(roots) != 2:
        raise ArcError(f"expected two finite preimages of {z0}")
    for r in roots:
        if abs(abs(r) - 1.0) > 1e-8:
            raise ArcError(f"{z0} is not an interior arc point "
                           "(preimage off the base circle)")
    # a true double root splits by ~sqrt(machine eps) under rounding, so
    # the collision tolerance must sit well above 1e-8 yet below the
    # ~sqrt(d) separation of preimages a genuine distance d from the end
    if abs(roots[0] - roots[1]) < 1e-6 * max(1.0, abs(roots[0])):
        raise ArcError(f"{z0} is an arc endpoint (coincident preimages)")
    r0, r1 = roots
    if (r0.imag, r0.real) >= (r1.imag, r1.real):
        return r0, r1
    return r1, r0


# ---------------------------------------------------------------------------
# serialization (used by the CLI map cache)
# ---------------------------------------------------------------------------

def map_to_dict(cmap: ConformalMap) -> dict:
    return {
        "side": cmap.side,
        "series": [[z.real, z.imag] for z in cmap.series],
        "rot": [cmap.rot.real, cmap.rot.imag],
        "s": cmap.s,
        "anchor": [cmap.anchor.real, cmap.anchor.imag],
        "anchor_deriv": [cmap.anchor_deriv.real, cmap.anchor_deriv.imag],
        "corr_t": list(cmap.corr_t),
        "delta": cmap.delta,
        "tail": cmap.tail,
    }


def map_from_dict(d: dict) -> ConformalMap:
    return ConformalMap(
        d["side"],
        tuple(complex(re, im) for re, im in d["series"]),
        complex(*d["rot"]), float(d["s"]),
        complex(*d["anchor"]), complex(*d["anchor_deriv"]),
        tuple(float(t) for t in d["corr_t"]),
        float(d["delta"]), float(d["tail"]),
    )


def map_to_json(cmap: ConformalMap) -> str:
    return json.dumps(map_to_dict(cmap))


def map_from_json(text: str) -> ConformalMap:
    return map_from_dict(json.loads(text))
