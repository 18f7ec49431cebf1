"""Absolute-stability analysis of linear multistep methods.

Boundary loci in the h*lambda plane, the root-condition membership test,
stiff-stability abscissae, and locus self-intersection detection.

Sign convention: with rho(z) = z^k - sum alpha_i z^{k-i} and
s(z) = sum beta_j z^{k-j}, applying the method to y' = lambda*y gives the
characteristic polynomial P(z) = rho(z) - sigma*s(z), so the unit-root curve
is sigma(theta) = rho(e^{i theta}) / s(e^{i theta}).  (Published displays of
the locus formula vary in sign; this convention puts the implicit-Euler locus
on the circle |sigma - 1| = 1, with the stability region outside the curve.)
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import polynomial_roots
from .methods import Family, LinearMultistepMethod, rho_sigma_polynomials

ROOT_CONDITION_TOL = 1e-9
SIMPLE_ROOT_SEPARATION = 1e-6


class DegenerateDenominatorError(Exception):
    pass


class DegreeCollapseError(Exception):
    pass


class NotAsymptoticallyStableError(Exception):
    pass


class DegenerateSpectrumError(Exception):
    pass


@dataclass(frozen=True)
class StabilityLocus:
    """Sampled boundary curve in the h*lambda plane.

    ``thetas`` spans [0, 2*pi] inclusive; ``sigmas`` are the matching complex
    boundary points.  ``method`` is retained so intersection refinement can
    re-evaluate the curve between samples.
    """

    method_order: int
    thetas: np.ndarray
    sigmas: np.ndarray
    closed: bool
    method: LinearMultistepMethod | None = field(default=None, compare=False)

    @property
    def samples(self):
        return list(zip(self.thetas, self.sigmas))


@dataclass(frozen=True)
class StiffStabilityReport:
    delta: float
    stiffly_stable: bool
    self_intersections: list


def _sigma_evaluator(method: LinearMultistepMethod):
    rho, s = rho_sigma_polynomials(method)
    rho_c = np.array([complex(c) for c in rho])
    s_c = np.array([complex(c) for c in s])

    def sigma(theta):
        z = np.exp(1j * np.asarray(theta, dtype=float))
        num = np.polyval(rho_c, z)
        den = np.polyval(s_c, z)
        return num, den

    return sigma


def boundary_locus(method: LinearMultistepMethod, num_samples: int) -> StabilityLocus:
    """Boundary locus sigma(theta_k) at num_samples+1 equispaced theta in [0, 2*pi]."""
    if num_samples < 16:
        raise ValueError(f"num_samples must be >= 16, got {num_samples}")
    thetas = np.linspace(0.0, 2.0 * np.pi, num_samples + 1)
    num, den = _sigma_evaluator(method)(thetas)
    small = np.abs(den) < 1e-14
    if small.any():
        theta_bad = thetas[small][0]
        raise DegenerateDenominatorError(
            f"|s(e^(i theta))| < 1e-14 at theta = {float(theta_bad):.12g}")
    sigmas = num / den
    closed = bool(abs(sigmas[0] - sigmas[-1]) < 1e-12)
    return StabilityLocus(method_order=method.order, thetas=thetas, sigmas=sigmas,
                          closed=closed, method=method)


def boundary_points(method: LinearMultistepMethod, thetas) -> np.ndarray:
    """sigma(theta) = rho(e^(i theta)) / s(e^(i theta)) at arbitrary angles."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    num, den = _sigma_evaluator(method)(thetas)
    small = np.abs(den) < 1e-14
    if small.any():
        raise DegenerateDenominatorError(
            f"|s(e^(i theta))| < 1e-14 at theta = {float(thetas[small][0]):.12g}")
    return num / den


def characteristic_polynomial(method: LinearMultistepMethod, sigma: complex) -> np.ndarray:
    """P(z) = rho(z) - sigma * s(z), descending complex coefficients."""
    rho, s = rho_sigma_polynomials(method)
    rho_c = np.array([complex(c) for c in rho])
    s_c = np.array([complex(c) for c in s])
    return rho_c - sigma * s_c


def is_absolutely_stable(method: LinearMultistepMethod, sigma: complex) -> bool:
    """Root condition for P(z) at the given sigma = h*lambda.

    True iff every root lies strictly inside the unit disk (tolerance 1e-9),
    allowing simple roots on the unit circle.
    """
    p = characteristic_polynomial(method, sigma)
    if abs(p[0]) < 1e-14:
        raise DegreeCollapseError(
            f"leading coefficient of P(z) vanishes at sigma = {sigma!r}")
    roots = np.array(polynomial_roots(p[::-1]))
    mods = np.abs(roots)
    for i, (r, m) in enumerate(zip(roots, mods)):
        if m < 1.0 - ROOT_CONDITION_TOL:
            continue
        if m > 1.0 + ROOT_CONDITION_TOL:
            return False
        others = np.delete(roots, i)
        if others.size and np.abs(others - r).min() <= SIMPLE_ROOT_SEPARATION:
            return False
    return True


def _golden_minimize(f, a, b, xtol):
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def stiff_stability_abscissa(method: LinearMultistepMethod, *, num_samples: int = 4096) -> float:
    """Leftmost real part reached by the boundary locus (the delta of stiff stability).

    Dense sampling followed by golden-section refinement around every sampled
    local minimum of Re(sigma(theta)).
    """
    if method.family is not Family.BDF or not 1 <= method.order <= 6:
        raise ValueError("stiff-stability abscissa is defined here for BDF orders 1..6")
    num_samples = max(num_samples, 4096)
    eval_sigma = _sigma_evaluator(method)

    def re_sigma(theta):
        num, den = eval_sigma(theta)
        return (num / den).real

    thetas = np.linspace(0.0, 2.0 * np.pi, num_samples, endpoint=False)
    f = re_sigma(thetas)
    dtheta = 2.0 * np.pi / num_samples
    is_min = (f <= np.roll(f, 1)) & (f <= np.roll(f, -1))
    best = f.min()
    for i in np.nonzero(is_min)[0]:
        _, fmin = _golden_minimize(re_sigma, thetas[i] - dtheta, thetas[i] + dtheta, 1e-10)
        best = min(best, float(fmin))
    return best


def _chord_intersection(p1, p2, p3, p4):
    """Strict interior crossing of segments (p1,p2) and (p3,p4); None if absent."""
    r = p2 - p1
    s = p4 - p3
    denom = r.real * s.imag - r.imag * s.real
    if denom == 0.0:
        return None
    qp = p3 - p1
    t = (qp.real * s.imag - qp.imag * s.real) / denom
    u = (qp.real * r.imag - qp.imag * r.real) / denom
    if 0.0 < t < 1.0 and 0.0 < u < 1.0:
        return p1 + t * r
    return None


def _refine_intersection(method, t1a, t1b, t2a, t2b, tol=1e-8):
    eval_sigma = _sigma_evaluator(method)

    def sig(t):
        num, den = eval_sigma(t)
        return complex(num / den)

    point = None
    for _ in range(80):
        p1a, p1b = sig(t1a), sig(t1b)
        p2a, p2b = sig(t2a), sig(t2b)
        hit = _chord_intersection(p1a, p1b, p2a, p2b)
        if hit is not None:
            point = hit
        if (t1b - t1a) < tol and (t2b - t2a) < tol:
            break
        t1m = 0.5 * (t1a + t1b)
        t2m = 0.5 * (t2a + t2b)
        found = False
        for a1, b1 in ((t1a, t1m), (t1m, t1b)):
            for a2, b2 in ((t2a, t2m), (t2m, t2b)):
                if _chord_intersection(sig(a1), sig(b1), sig(a2), sig(b2)) is not None:
                    t1a, t1b, t2a, t2b = a1, b1, a2, b2
                    found = True
                    break
            if found:
                break
        if not found:
            # Crossing fell on a sub-segment boundary; shrink symmetrically.
            t1a, t1b = 0.75 * t1a + 0.25 * t1b, 0.25 * t1a + 0.75 * t1b
            t2a, t2b = 0.75 * t2a + 0.25 * t2b, 0.25 * t2a + 0.75 * t2b
    return point


def find_self_intersections(locus: StabilityLocus) -> list:
    """Crossing points of non-adjacent polyline segments, bisection-refined.

    The trivial closure contact at theta = 0 / 2*pi is excluded.  Empty for
    the simple closed loci of BDF orders 1..6.
    """
    pts = np.asarray(locus.sigmas)
    if pts.size < 1025:
        raise ValueError("locus must carry at least 1024 samples")
    ax, ay = pts[:-1].real, pts[:-1].imag
    bx, by = pts[1:].real, pts[1:].imag
    nseg = ax.size
    minx, maxx = np.minimum(ax, bx), np.maximum(ax, bx)
    miny, maxy = np.minimum(ay, by), np.maximum(ay, by)
    rx, ry = bx - ax, by - ay

    hits = []
    jdx = np.arange(nseg)
    chunk = 512
    for i0 in range(0, nseg, chunk):
        i1 = min(i0 + chunk, nseg)
        idx = np.arange(i0, i1)
        overlap = ((minx[idx, None] <= maxx[None, :]) & (maxx[idx, None] >= minx[None, :]) &
                   (miny[idx, None] <= maxy[None, :]) & (maxy[idx, None] >= miny[None, :]))
        overlap &= jdx[None, :] > (idx[:, None] + 1)
        ii, jj = np.nonzero(overlap)
        if ii.size == 0:
            continue
        ii = ii + i0
        keep = ~((ii == 0) & (jj == nseg - 1))  # cyclic adjacency through closure
        ii, jj = ii[keep], jj[keep]
        if ii.size == 0:
            continue
        denom = rx[ii] * ry[jj] - ry[ii] * rx[jj]
        qpx = ax[jj] - ax[ii]
        qpy = ay[jj] - ay[ii]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (qpx * ry[jj] - qpy * rx[jj]) / denom
            u = (qpx * ry[ii] - qpy * rx[ii]) / denom
        crossing = (denom != 0.0) & (t > 0.0) & (t < 1.0) & (u > 0.0) & (u < 1.0)
        for i, j in zip(ii[crossing], jj[crossing]):
            hits.append((int(i), int(j)))

    points = []
    th = locus.thetas
    for i, j in hits:
        if locus.method is not None:
            p = _refine_intersection(locus.method, th[i], th[i + 1], th[j], th[j + 1])
        else:
            p = _chord_intersection(complex(pts[i]), complex(pts[i + 1]),
                                    complex(pts[j]), complex(pts[j + 1]))
        if p is not None:
            points.append(complex(p))

    # Merge duplicates from crossings detected near shared sample vertices.
    merged: list[complex] = []
    for p in sorted(points, key=lambda c: (c.real, c.imag)):
        if all(abs(p - q) > 1e-6 for q in merged):
            merged.append(p)
    return merged


def is_stiffly_stable(method: LinearMultistepMethod, *, num_samples: int = 8192) -> StiffStabilityReport:
    """Stiff-stability verdict for BDF orders 1..7.

    Requires a simple closed locus plus absolute stability at probe points on
    the real axis left of delta and deep in the left half plane.  Order 7 has
    no abscissa (reported as NaN); its self-intersecting locus fails the test.
    """
    if method.family is not Family.BDF or not 1 <= method.order <= 7:
        raise ValueError("stiff stability is assessed for BDF orders 1..7")
    locus = boundary_locus(method, num_samples)
    intersections = find_self_intersections(locus)
    if method.order == 7:
        return StiffStabilityReport(delta=float("nan"), stiffly_stable=False,
                                    self_intersections=intersections)
    delta = stiff_stability_abscissa(method)
    stable = not intersections
    if stable:
        for probe in (delta - 1.0, delta - 10.0, delta - 100.0, -1e6):
            if not is_absolutely_stable(method, complex(probe)):
                stable = False
                break
    return StiffStabilityReport(delta=delta, stiffly_stable=stable,
                                self_intersections=intersections)


def stiffness_ratio(eigenvalues) -> float:
    """max|Re lambda| / min|Re lambda| over an asymptotically stable spectrum."""
    lams = [complex(v) for v in eigenvalues]
    if not lams:
        raise ValueError("eigenvalue list must be non-empty")
    for lam in lams:
        if lam.real >= 0.0:
            raise NotAsymptoticallyStableError(
                f"eigenvalue {lam} has non-negative real part")
    re = np.abs([lam.real for lam in lams])
    if re.min() < 1e-300:
        raise DegenerateSpectrumError("smallest |Re lambda| is degenerate")
    return float(re.max() / re.min())
