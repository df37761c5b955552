"""Independent numerical oracles used to cross-check derived values.

Nothing here imports from the package's computational paths beyond plain
evaluation of the quantity under test: derivatives are re-derived by
finite differences, Green's functions by a five-point Shortley-Weller
Dirichlet solve on a Cartesian grid, Laurent coefficients by randomized
least-squares fits.
"""

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

TWO_PI = 2.0 * np.pi


def richardson_directional(f, x0, direction, h=1e-3):
    """One-sided directional derivative with (h, h/10) Richardson step.

    Eliminates the first-order error term, leaving O(h^2).
    """
    d1 = (f(x0 + h * direction) - f(x0)) / h
    d2 = (f(x0 + (h / 10.0) * direction) - f(x0)) / (h / 10.0)
    return (10.0 * d2 - d1) / 9.0


# ---------------------------------------------------------------------------
# Shortley-Weller Dirichlet solver
# ---------------------------------------------------------------------------

def _cut_fractions(z_in, steps, inside, h):
    """Vectorized bisection: fraction of each arm inside the domain.

    z_in are inside points whose neighbor at z_in + h*step is outside;
    returns s in (0, 1] with z_in + s*h*step on the boundary.
    """
    lo = np.zeros(len(z_in))
    hi = np.ones(len(z_in))
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        good = np.array([inside(z + m * h * d)
                         for z, m, d in zip(z_in, mid, steps)])
        lo = np.where(good, mid, lo)
        hi = np.where(good, hi, mid)
    return hi


class DirichletGreen:
    """Green's function of a planar Jordan domain by finite differences.

    Solves the harmonic companion h with h = log|gamma - pole| on the
    boundary using a five-point Shortley-Weller discretization, then
    g(z, pole) = h(z) - log|z - pole|.  ``inside`` is a scalar
    point-membership predicate; the box must contain the domain.
    """

    def __init__(self, inside, box, pole, h=0.006):
        self.inside = inside
        self.pole = complex(pole)
        self.h = h
        x0, x1, y0, y1 = box
        xs = np.arange(x0, x1 + h / 2, h)
        ys = np.arange(y0, y1 + h / 2, h)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        Z = X + 1j * Y
        mask = np.array([[inside(z) for z in row] for row in Z])
        idx = -np.ones(Z.shape, dtype=int)
        idx[mask] = np.arange(mask.sum())
        n = mask.sum()

        bc = lambda z: np.log(abs(z - self.pole))
        rows, cols, vals = [], [], []
        rhs = np.zeros(n)
        steps = (1, -1, 1j, -1j)
        offsets = ((1, 0), (-1, 0), (0, 1), (0, -1))

        # collect boundary-cut arm lengths first (vectorized bisection)
        cut_arms = {}
        pending_z, pending_d = [], []
        nx, ny = Z.shape
        for i in range(nx):
            for j in range(ny):
                if not mask[i, j]:
                    continue
                for step, (di, dj) in zip(steps, offsets):
                    ii, jj = i + di, j + dj
                    out = not (0 <= ii < nx and 0 <= jj < ny and mask[ii, jj])
                    if out:
                        pending_z.append(Z[i, j])
                        pending_d.append(step)
                        cut_arms[(i, j, step)] = None
        if pending_z:
            fr = _cut_fractions(np.array(pending_z), np.array(pending_d),
                                inside, h)
            for key, s in zip(list(cut_arms), fr):
                cut_arms[key] = max(float(s), 1e-6)

        for i in range(nx):
            for j in range(ny):
                if not mask[i, j]:
                    continue
                p = idx[i, j]
                arm = {}
                for step, (di, dj) in zip(steps, offsets):
                    ii, jj = i + di, j + dj
                    if 0 <= ii < nx and 0 <= jj < ny and mask[ii, jj]:
                        arm[step] = (1.0, idx[ii, jj])
                    else:
                        arm[step] = (cut_arms[(i, j, step)], -1)
                for s_pos, s_neg in ((1, -1), (1j, -1j)):
                    aP, qP = arm[s_pos]
                    aM, qM = arm[s_neg]
                    hp, hm = aP * h, aM * h
                    cP = 2.0 / (hp * (hp + hm))
                    cM = 2.0 / (hm * (hp + hm))
                    c0 = -2.0 / (hp * hm)
                    rows.append(p); cols.append(p); vals.append(c0)
                    for c, q, a, step in ((cP, qP, aP, s_pos),
                                          (cM, qM, aM, s_neg)):
                        if q >= 0:
                            rows.append(p); cols.append(q); vals.append(c)
                        else:
                            rhs[p] -= c * bc(Z[i, j] + a * h * step)

        A = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
        self._xs, self._ys, self._idx = xs, ys, idx
        self._sol = spla.spsolve(A, rhs)

    def harmonic_at(self, z):
        """Bilinear interpolation of the harmonic companion at z."""
        x, y = z.real, z.imag
        i = int(np.searchsorted(self._xs, x)) - 1
        j = int(np.searchsorted(self._ys, y)) - 1
        q = [self._idx[i + di, j + dj] for di in (0, 1) for dj in (0, 1)]
        if min(q) < 0:
            raise ValueError(f"probe {z} too close to the boundary")
        tx = (x - self._xs[i]) / (self._xs[i + 1] - self._xs[i])
        ty = (y - self._ys[j]) / (self._ys[j + 1] - self._ys[j])
        v00, v01, v10, v11 = (self._sol[k] for k in q)
        return ((1 - tx) * (1 - ty) * v00 + (1 - tx) * ty * v01
                + tx * (1 - ty) * v10 + tx * ty * v11)

    def green_at(self, z):
        return self.harmonic_at(z) - np.log(abs(complex(z) - self.pole))


def ellipse_interior_green(pole, probes, a=1.2, b=0.8, h=0.006):
    """Ellipse-interior Green values at probes, pole inside."""
    inside = lambda z: (z.real / a) ** 2 + (z.imag / b) ** 2 < 1.0
    solver = DirichletGreen(inside, (-a, a, -b, b), pole, h=h)
    return [solver.green_at(z) for z in probes]


def ellipse_exterior_green(pole, probes, a=1.2, b=0.8, h=0.004):
    """Ellipse-exterior Green values via plane inversion w = 1/z.

    The exterior (plus infinity) maps onto a bounded Jordan domain W;
    Green's functions are conformally invariant, so g at z with the
    given pole equals g_W at 1/z with pole 1/pole (0 for infinity).
    """
    def inside(w):
        if w == 0:
            return True
        z = 1.0 / w
        return (z.real / a) ** 2 + (z.imag / b) ** 2 > 1.0

    w_pole = 0j if pole is None or np.isinf(abs(np.complex128(pole))) \
        else 1.0 / complex(pole)
    r = 1.0 / b
    solver = DirichletGreen(inside, (-r, r, -r, r), w_pole, h=h)
    return [solver.green_at(1.0 / complex(z)) for z in probes]


# ---------------------------------------------------------------------------
# Laurent coefficients by randomized least squares
# ---------------------------------------------------------------------------

def laurent_principal_lstsq(g, center, order, rho, rng, n_samples=600,
                            k_analytic=14):
    """Principal-part coefficients of g at ``center`` by least squares.

    Samples g on two rings of random angles around the center and fits
    a truncated Laurent series with powers -order..k_analytic; returns
    (c_1, ..., c_order) where c_k multiplies (z - center)^{-k}.
    """
    angles = rng.uniform(0.0, TWO_PI, n_samples)
    radii = np.where(np.arange(n_samples) % 2 == 0, rho, 0.6 * rho)
    zs = center + radii * np.exp(1j * angles)
    powers = np.arange(-order, k_analytic + 1)
    basis = (zs[:, None] - center) ** powers[None, :]
    vals = np.array([g(z) for z in zs])
    coef, *_ = np.linalg.lstsq(basis, vals, rcond=None)
    neg = coef[:order][::-1]  # reorder to c_1..c_order
    return tuple(neg)
