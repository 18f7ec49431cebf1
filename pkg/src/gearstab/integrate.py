"""ODE integration: explicit reference steppers, implicit multistep stepping
with Newton correction, fixed-step and adaptive (variable order 1..6 BDF)
drivers, linear-system decoupling, and a small stiff problem library.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import BarycentricInterpolator

from .linalg import eigendecompose, lu_solve
from .methods import (Family, LinearMultistepMethod, adams_moulton_coefficients,
                      bdf_coefficients)

_SQRT_EPS = math.sqrt(np.finfo(float).eps)


class EvaluationError(Exception):
    pass


class NewtonFailureError(Exception):
    def __init__(self, message, last_iterate=None, iters=0):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.iters = iters


class Status(Enum):
    COMPLETED = "completed"
    STEP_SIZE_UNDERFLOW = "step-size-underflow"
    NEWTON_FAILURE = "newton-failure"


@dataclass
class OdeProblem:
    """First-order initial value problem y' = f(x, y) on [x0, x_end]."""

    dimension: int
    rhs: Callable[[float, np.ndarray], np.ndarray]
    x0: float
    y0: np.ndarray
    x_end: float
    jacobian: Optional[Callable[[float, np.ndarray], np.ndarray]] = None
    exact: Optional[Callable[[float], np.ndarray]] = None

    def __post_init__(self):
        self.y0 = np.atleast_1d(np.asarray(self.y0))
        if self.x_end <= self.x0:
            raise ValueError("x_end must exceed x0")
        if self.y0.shape != (self.dimension,):
            raise ValueError(f"y0 must have length {self.dimension}")

    def f(self, x, y):
        out = np.atleast_1d(np.asarray(self.rhs(x, y)))
        if out.shape != (self.dimension,):
            raise EvaluationError(f"rhs returned shape {out.shape}, expected ({self.dimension},)")
        if not np.all(np.isfinite(np.abs(out))):
            raise EvaluationError(f"rhs returned non-finite values at x = {x}")
        return out


@dataclass
class IntegrationTrace:
    """Accepted steps: abscissae, states, step sizes, orders, Newton counts.

    Entry 0 is the initial condition (h, order, newton_iters recorded as 0).
    """

    xs: list = field(default_factory=list)
    ys: list = field(default_factory=list)
    hs: list = field(default_factory=list)
    orders: list = field(default_factory=list)
    newton_iters: list = field(default_factory=list)
    status: Status = Status.COMPLETED
    rejections: int = 0

    def append(self, x, y, h, order, iters):
        self.xs.append(float(x))
        self.ys.append(np.array(y))
        self.hs.append(float(h))
        self.orders.append(int(order))
        self.newton_iters.append(int(iters))


@dataclass(frozen=True)
class SolverConfig:
    rtol: float = 1e-6
    atol: float = 1e-9
    h_init: float = 1e-6
    h_min: float = 1e-14
    h_max: float = math.inf
    max_order: int = 6
    newton_tol: float = 0.01
    newton_max_iters: int = 10

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0 and self.newton_tol > 0):
            raise ValueError("tolerances must be positive")
        if not (0 < self.h_min <= self.h_init <= self.h_max):
            raise ValueError("need 0 < h_min <= h_init <= h_max")
        if not 1 <= self.max_order <= 6:
            raise ValueError("max_order must lie in 1..6 (stiffly stable BDF range)")
        if self.newton_max_iters < 1:
            raise ValueError("newton_max_iters must be positive")


def step_explicit_euler(problem: OdeProblem, x, y, h):
    if h <= 0:
        raise ValueError("step size must be positive")
    return y + h * problem.f(x, y)


def step_rk4(problem: OdeProblem, x, y, h):
    if h <= 0:
        raise ValueError("step size must be positive")
    k1 = problem.f(x, y)
    k2 = problem.f(x + h / 2, y + h * k1 / 2)
    k3 = problem.f(x + h / 2, y + h * k2 / 2)
    k4 = problem.f(x + h, y + h * k3)
    return y + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6


def _fd_jacobian(problem, x, y, f0):
    n = y.size
    J = np.empty((n, n))
    for i in range(n):
        pert = _SQRT_EPS * (1.0 + abs(y[i]))
        yp = y.copy()
        yp[i] += pert
        J[:, i] = (problem.f(x, yp) - f0) / pert
    return J


def extrapolate(history_y, steps_ahead=1):
    """Polynomial extrapolation of a uniform-grid history (newest first)."""
    k = len(history_y)
    out = np.zeros_like(np.asarray(history_y[0], dtype=float), dtype=float)
    for i in range(k):
        out = out + (-1) ** i * comb(k, i + 1) * np.asarray(history_y[i])
    return out


def step_lmm_implicit(method: LinearMultistepMethod, problem: OdeProblem,
                      history_x, history_y, history_f, h, config: SolverConfig):
    """One implicit multistep step solved by damped Newton iteration.

    History lists are newest-first on a uniform grid of spacing h; y-history
    must hold exactly method.steps entries.  Returns (y_next, newton_iters).
    """
    k = method.steps
    if len(history_x) != k or len(history_y) != k:
        raise ValueError(f"history must hold exactly {k} entries")
    n_f = len(method.betas) - 1
    if len(history_f) < n_f:
        raise ValueError(f"f-history must hold at least {n_f} entries")
    x_next = history_x[0] + h
    beta0 = float(method.betas[0])

    psi = np.zeros(problem.dimension)
    for i, a in enumerate(method.alphas):
        if a:
            psi = psi + float(a) * history_y[i]
    for j in range(1, len(method.betas)):
        b = method.betas[j]
        if b:
            psi = psi + h * float(b) * history_f[j - 1]

    y = extrapolate(history_y)
    f_val = problem.f(x_next, y)
    residual = y - h * beta0 * f_val - psi

    iteration_matrix = None
    for it in range(1, config.newton_max_iters + 1):
        if iteration_matrix is None:
            J = (problem.jacobian(x_next, y) if problem.jacobian is not None
                 else _fd_jacobian(problem, x_next, y, f_val))
            iteration_matrix = np.eye(problem.dimension) - h * beta0 * np.asarray(J, dtype=float)
        dy = lu_solve(iteration_matrix, -residual)
        # Damping: halve the update while it fails to reduce the residual.
        lam = 1.0
        for _ in range(5):
            y_try = y + lam * dy
            f_try = problem.f(x_next, y_try)
            res_try = y_try - h * beta0 * f_try - psi
            if np.linalg.norm(res_try) <= np.linalg.norm(residual) or lam <= 1.0 / 16:
                break
            lam *= 0.5
        y, f_val, residual = y_try, f_try, res_try
        if lam * np.linalg.norm(dy) <= config.newton_tol * (
                config.atol + config.rtol * np.linalg.norm(y)):
            return y, it
        if lam < 1.0:
            iteration_matrix = None  # damping kicked in: refresh the Jacobian
    raise NewtonFailureError(
        f"Newton did not converge in {config.newton_max_iters} iterations at x = {x_next}",
        last_iterate=y, iters=config.newton_max_iters)


def _method_for(family: Family, order: int) -> LinearMultistepMethod:
    if family is Family.BDF:
        return bdf_coefficients(order)
    return adams_moulton_coefficients(order - 1)


def integrate_fixed(problem: OdeProblem, family, order: int, h: float,
                    config: SolverConfig | None = None, *,
                    exact_start: bool = False) -> IntegrationTrace:
    """Fixed-step integration to x_end.

    ``family`` is "euler", "rk4", or a methods.Family value for the implicit
    multistep families.  Implicit runs self-start by ramping the order up from
    1 unless ``exact_start`` seeds the history from problem.exact.
    """
    span = problem.x_end - problem.x0
    n_steps = round(span / h)
    if n_steps < 1 or abs(n_steps * h - span) > 1e-12 * abs(span):
        raise ValueError(f"h = {h} does not divide the interval length {span}")
    config = config or SolverConfig(h_init=h, h_max=max(h, 1.0))

    trace = IntegrationTrace()
    trace.append(problem.x0, problem.y0, 0.0, 0, 0)

    if family in ("euler", "rk4"):
        stepper = step_explicit_euler if family == "euler" else step_rk4
        nominal = 1 if family == "euler" else 4
        x, y = problem.x0, np.asarray(problem.y0, dtype=float)
        for i in range(n_steps):
            y = stepper(problem, x, y, h)
            x = problem.x0 + (i + 1) * h
            trace.append(x, y, h, nominal, 0)
        return trace

    family = Family(family)
    hist_x = [problem.x0]
    hist_y = [np.asarray(problem.y0, dtype=float)]
    hist_f = [problem.f(problem.x0, hist_y[0])]
    start = 0
    if exact_start:
        if problem.exact is None:
            raise ValueError("exact_start requires problem.exact")
        for i in range(1, min(order, n_steps + 1)):
            x_i = problem.x0 + i * h
            y_i = np.atleast_1d(np.asarray(problem.exact(x_i), dtype=float))
            hist_x.insert(0, x_i)
            hist_y.insert(0, y_i)
            hist_f.insert(0, problem.f(x_i, y_i))
            trace.append(x_i, y_i, h, order, 0)
            start = i

    for i in range(start, n_steps):
        q_step = order if exact_start else min(i + 1, order)
        method = _method_for(family, q_step)
        k = method.steps
        try:
            y_next, iters = step_lmm_implicit(method, problem, hist_x[:k], hist_y[:k],
                                              hist_f[:k], h, config)
        except NewtonFailureError as exc:
            trace.status = Status.NEWTON_FAILURE
            if exc.last_iterate is not None:
                trace.append(hist_x[0] + h, exc.last_iterate, h, q_step, exc.iters)
            return trace
        x_next = problem.x0 + (i + 1) * h
        hist_x.insert(0, x_next)
        hist_y.insert(0, y_next)
        hist_f.insert(0, problem.f(x_next, y_next))
        depth = order + 2
        hist_x, hist_y, hist_f = hist_x[:depth], hist_y[:depth], hist_f[:depth]
        trace.append(x_next, y_next, h, q_step, iters)
    return trace


def _wrms(v, y, config):
    scale = config.atol + config.rtol * np.abs(y)
    return float(np.sqrt(np.mean((v / scale) ** 2)))


def _backward_difference(history_y, order):
    """nabla^order applied to the newest history value (newest-first input)."""
    out = np.zeros_like(np.asarray(history_y[0], dtype=float))
    for m in range(order + 1):
        out = out + (-1) ** m * comb(order, m) * history_y[m]
    return out


def _error_coefficient(q: int) -> float:
    # Local truncation error of BDFq is ~ (beta0/(q+1)) h^{q+1} y^{(q+1)}.
    return float(Fraction(bdf_coefficients(q).betas[0]) / (q + 1))


def _reinterpolate(hist_x, hist_y, h_new, depth):
    """History resampled onto a uniform grid of spacing h_new ending at hist_x[0].

    Only used for spacing decreases: every new point lies inside the stored
    span, so no extrapolation error is introduced.
    """
    x_now = hist_x[0]
    span = x_now - hist_x[-1]
    n_pts = max(1, min(depth, int(span / h_new + 1e-9) + 1))
    interp = BarycentricInterpolator(np.asarray(hist_x), np.asarray(hist_y))
    new_x = [x_now - i * h_new for i in range(n_pts)]
    new_y = [np.atleast_1d(interp(x)) for x in new_x]
    new_y[0] = np.array(hist_y[0])
    return new_x, new_y


def integrate_adaptive(problem: OdeProblem, config: SolverConfig | None = None) -> IntegrationTrace:
    """Variable-order (1..max_order), variable-step BDF integration.

    Local error is the predictor-corrector difference scaled by the method
    error constant; accepted when its weighted RMS is <= 1.  After acceptance
    the orders {q-1, q, q+1} are scored by the step size each would permit
    (growth capped at x2, shrink floored at x0.1, safety 0.9).  Step changes
    regrid the history by polynomial interpolation onto the new uniform
    spacing, interior points only, and h and q are then held for q+1 steps so
    the history refills with computed points before the next decision.
    """
    config = config or SolverConfig()
    span = problem.x_end - problem.x0
    h = min(config.h_init, span)

    trace = IntegrationTrace()
    y0 = np.asarray(problem.y0, dtype=float)
    trace.append(problem.x0, y0, 0.0, 0, 0)

    hist_x = [problem.x0]
    hist_y = [y0]
    q = 1
    newton_fail_streak = 0
    # Stride-2 coarsening halves the history, so keep 2q+1 points per order q.
    depth_cap = 2 * config.max_order + 3
    # After any grid change, hold h and q for q+1 steps so the history refills
    # with computed (not interpolated) points before the next decision.
    hold = 0

    def shrink(h_new):
        nonlocal hist_x, hist_y
        if len(hist_x) > 1:
            # Keep only what the current order needs: interpolated points decay
            # out of the history quickly instead of feeding later estimates.
            hist_x, hist_y = _reinterpolate(hist_x, hist_y, h_new, q + 2)
        return h_new

    x = problem.x0
    while x < problem.x_end - 1e-12 * max(1.0, abs(problem.x_end)):
        clipped = min(h, problem.x_end - x)
        if abs(clipped - h) > 1e-15 * h:
            h = shrink(clipped)
            hold = q + 1
        q = min(q, len(hist_x))  # a regrid may have shortened the history
        method = bdf_coefficients(q)
        k = method.steps
        hx, hy = hist_x[:k], hist_y[:k]
        hf = [np.zeros(problem.dimension)] * k  # BDF uses no f-history
        try:
            y_new, iters = step_lmm_implicit(method, problem, hx, hy, hf, h, config)
            newton_fail_streak = 0
        except (NewtonFailureError, EvaluationError):
            if h <= config.h_min * (1 + 1e-12):
                newton_fail_streak += 1
                if newton_fail_streak >= 3:
                    trace.status = Status.NEWTON_FAILURE
                    return trace
            if h / 2 < config.h_min and newton_fail_streak == 0:
                trace.status = Status.STEP_SIZE_UNDERFLOW
                return trace
            h = shrink(max(h / 2, config.h_min))
            hold = q + 1
            trace.rejections += 1
            continue

        # Error estimate: corrector minus the degree-q extrapolant (q+1 points
        # when available), scaled to the BDFq truncation-error constant.
        n_pred = min(q + 1, len(hist_y))
        y_pred = extrapolate(hist_y[:n_pred])
        c = _error_coefficient(q)
        est = (c / (1.0 + c)) * (y_new - y_pred)
        err = _wrms(est, y_new, config)

        if err > 1.0:
            factor = max(0.1, min(0.9, 0.9 * err ** (-1.0 / (q + 1))))
            h_new = h * factor
            if h_new < config.h_min:
                trace.status = Status.STEP_SIZE_UNDERFLOW
                return trace
            h = shrink(h_new)
            hold = q + 1
            trace.rejections += 1
            continue

        x = hist_x[0] + h
        hist_x.insert(0, x)
        hist_y.insert(0, y_new)
        hist_x, hist_y = hist_x[:depth_cap], hist_y[:depth_cap]
        trace.append(x, y_new, h, q, iters)

        if hold > 0:
            hold -= 1
            continue

        # Score candidate orders by the step size each would permit.
        def step_factor(p, err_p):
            return max(0.1, min(2.0, 0.9 * max(err_p, 1e-14) ** (-1.0 / (p + 1))))

        best_q, best_r = q, step_factor(q, err)
        if q > 1 and len(hist_y) >= q + 1:
            cd = _error_coefficient(q - 1)
            err_down = _wrms(cd * _backward_difference(hist_y, q), y_new, config)
            r = step_factor(q - 1, err_down)
            if r > best_r:
                best_q, best_r = q - 1, r
        if q < config.max_order and len(hist_y) >= q + 3:
            cu = _error_coefficient(q + 1)
            err_up = _wrms(cu * _backward_difference(hist_y, q + 2), y_new, config)
            r = step_factor(q + 1, err_up)
            if r > best_r:
                best_q, best_r = q + 1, r
        q = best_q
        if best_r > 1.1:
            # Cap growth so the regridded history stays inside the stored span.
            r_cap = (len(hist_x) - 1) / q
            r = min(best_r, r_cap)
            if r > 1.1:
                h = shrink(min(h * r, config.h_max))
                hold = q + 1
        elif best_r < 0.9:
            h = shrink(max(h * best_r, config.h_min))
            hold = q + 1
    trace.status = Status.COMPLETED
    return trace


def decouple_linear_system(A, y0, x0, x_end):
    """Split y' = A y into scalar problems z_i' = lambda_i z_i plus a recomposition map.

    Requires A diagonalizable with distinct eigenvalues.  Returns
    (problems, recompose) with recompose mapping a vector of scalar states Z
    back to Y = T Z.
    """
    A = np.asarray(A, dtype=float)
    T, lams = eigendecompose(A)
    y0 = np.atleast_1d(np.asarray(y0))
    z0 = np.linalg.solve(T, y0.astype(complex))
    problems = []
    for lam_i, z0_i in zip(lams, z0):
        def rhs(x, z, lam=lam_i):
            return lam * z

        def exact(x, lam=lam_i, z=z0_i, x_start=x0):
            return np.array([z * np.exp(lam * (x - x_start))])

        problems.append(OdeProblem(dimension=1, rhs=rhs, x0=x0,
                                   y0=np.array([z0_i]), x_end=x_end, exact=exact))

    def recompose(z):
        return T @ np.asarray(z, dtype=complex).reshape(-1)

    return problems, recompose


def problem_library(name: str, params: dict | None = None) -> OdeProblem:
    """Built-in test problems: "dahlquist", "linear_system", "van_der_pol"."""
    params = dict(params or {})
    x0 = float(params.pop("x0", 0.0))
    x_end = float(params.pop("x_end", 1.0))
    if name == "dahlquist":
        lam = complex(params.pop("lam"))
        if lam.imag == 0:
            lam = lam.real
        y0 = params.pop("y0", 1.0)
        if params:
            raise ValueError(f"unknown dahlquist params: {sorted(params)}")
        y0v = np.atleast_1d(np.asarray(y0))
        return OdeProblem(
            dimension=1, rhs=lambda x, y: lam * y, x0=x0, y0=y0v, x_end=x_end,
            jacobian=lambda x, y: np.array([[lam]]),
            exact=lambda x: y0v * np.exp(lam * (x - x0)))
    if name == "linear_system":
        A = np.asarray(params.pop("A"), dtype=float)
        y0 = np.atleast_1d(np.asarray(params.pop("y0", np.ones(A.shape[0])), dtype=float))
        if params:
            raise ValueError(f"unknown linear_system params: {sorted(params)}")
        exact = None
        try:
            _, recompose = decouple_linear_system(A, y0, x0, x_end)
            T, lams = eigendecompose(A)
            z0 = np.linalg.solve(T, y0.astype(complex))

            def exact(x):
                z = z0 * np.exp(np.asarray(lams) * (x - x0))
                return (T @ z).real
        except Exception:
            pass
        return OdeProblem(dimension=A.shape[0], rhs=lambda x, y: A @ y, x0=x0,
                          y0=y0, x_end=x_end, jacobian=lambda x, y: A, exact=exact)
    if name == "van_der_pol":
        mu = float(params.pop("mu"))
        y0 = np.atleast_1d(np.asarray(params.pop("y0", [2.0, 0.0]), dtype=float))
        if params:
            raise ValueError(f"unknown van_der_pol params: {sorted(params)}")

        def rhs(x, y):
            return np.array([y[1], mu * (1.0 - y[0] ** 2) * y[1] - y[0]])

        def jac(x, y):
            return np.array([[0.0, 1.0],
                             [-2.0 * mu * y[0] * y[1] - 1.0, mu * (1.0 - y[0] ** 2)]])

        return OdeProblem(dimension=2, rhs=rhs, x0=x0, y0=y0, x_end=x_end, jacobian=jac)
    raise ValueError(f"unknown problem {name!r}")
