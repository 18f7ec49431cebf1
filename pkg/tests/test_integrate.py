"""Fixed and adaptive integrator tests on the built-in problem library."""
import numpy as np
import pytest

from gearstab.integrate import (
    OdeProblem,
    SolverConfig,
    Status,
    decouple_linear_system,
    extrapolate,
    integrate_adaptive,
    integrate_fixed,
    problem_library,
    step_explicit_euler,
    step_lmm_implicit,
    step_rk4,
)
from gearstab.methods import Family, bdf_coefficients


def _dahlquist(lam, x_end=1.0):
    return problem_library("dahlquist", {"lam": lam, "x_end": x_end})


def test_euler_step_closed_form():
    p = _dahlquist(-2.0)
    y1 = step_explicit_euler(p, 0.0, np.array([1.0]), 0.1)
    assert y1[0] == pytest.approx(1.0 - 0.2)


def test_rk4_step_matches_exponential_to_fifth_order():
    p = _dahlquist(-2.0)
    y1 = step_rk4(p, 0.0, np.array([1.0]), 0.1)
    # One step reproduces the degree-4 Taylor polynomial of e^(h lam);
    # the defect from the true exponential is O((h lam)^5 / 120).
    assert y1[0] == pytest.approx(np.exp(-0.2), abs=1e-5)
    from math import factorial
    assert y1[0] == pytest.approx(sum((-0.2) ** k / factorial(k)
                                      for k in range(5)), abs=1e-14)


def test_bdf1_step_closed_form():
    # Implicit Euler on y' = lam y: y1 = y0 / (1 - h lam).
    p = _dahlquist(-2.0)
    cfg = SolverConfig(newton_tol=1e-10, h_init=0.1, h_max=1.0)
    y1, iters = step_lmm_implicit(bdf_coefficients(1), p, [0.0], [np.array([1.0])],
                                  [np.array([-2.0])], 0.1, cfg)
    assert y1[0] == pytest.approx(1.0 / 1.2, abs=1e-9)
    assert iters >= 1


def test_extrapolate_is_polynomial_exact():
    # Quadratic data at x = 0, -1, -2 extrapolated to x = 1 (newest first).
    vals = [np.array([x ** 2 + 1.0]) for x in (0.0, -1.0, -2.0)]
    assert extrapolate(vals)[0] == pytest.approx(2.0)


def test_fixed_requires_commensurate_step():
    p = _dahlquist(-1.0)
    with pytest.raises(ValueError):
        integrate_fixed(p, "euler", 1, 0.3)


def test_fixed_euler_trace_shape():
    p = _dahlquist(-1.0)
    tr = integrate_fixed(p, "euler", 1, 0.25)
    assert len(tr.xs) == 5
    assert tr.xs[0] == 0.0 and tr.xs[-1] == pytest.approx(1.0)
    assert tr.hs[0] == 0.0
    assert tr.status is Status.COMPLETED


def test_fixed_bdf2_accuracy():
    p = _dahlquist(-2.0)
    tr = integrate_fixed(p, Family.BDF, 2, 0.01)
    assert abs(tr.ys[-1][0] - np.exp(-2.0)) < 1e-4


def test_fixed_trapezoidal_accuracy():
    p = _dahlquist(-2.0)
    tr = integrate_fixed(p, Family.ADAMS_MOULTON, 2, 0.01)
    # The implicit-Euler starting step contributes an O(h^2) error on top of
    # the trapezoidal O(h^2) accumulation.
    assert abs(tr.ys[-1][0] - np.exp(-2.0)) < 1e-4


def test_exact_start_seeds_history():
    p = _dahlquist(-2.0)
    cfg = SolverConfig(rtol=1e-10, atol=1e-12, newton_tol=1e-2, h_init=1e-3, h_max=1.0)
    tr = integrate_fixed(p, Family.BDF, 3, 0.05, cfg, exact_start=True)
    assert tr.ys[2][0] == pytest.approx(np.exp(-2 * 0.1), abs=1e-14)


def test_adaptive_dahlquist_accuracy():
    p = _dahlquist(-1.0)
    tr = integrate_adaptive(p, SolverConfig(rtol=1e-6, atol=1e-6))
    assert tr.status is Status.COMPLETED
    assert abs(tr.ys[-1][0] - np.exp(-1.0)) < 1e-4


def test_adaptive_stiff_dahlquist_completes():
    p = _dahlquist(-1e6)
    tr = integrate_adaptive(p, SolverConfig(rtol=1e-4, atol=1e-8))
    assert tr.status is Status.COMPLETED
    assert len(tr.xs) < 10000
    assert abs(tr.ys[-1][0]) < 1e-4


def test_adaptive_orders_stay_in_range():
    p = problem_library("van_der_pol", {"mu": 5.0, "x_end": 10.0})
    tr = integrate_adaptive(p, SolverConfig(rtol=1e-5, atol=1e-8, max_order=4))
    assert tr.status is Status.COMPLETED
    assert max(tr.orders) <= 4


def test_decouple_linear_system_roundtrip():
    A = np.array([[-3.0, 1.0], [0.0, -1.0]])
    y0 = np.array([1.0, 2.0])
    scalar_problems, recompose = decouple_linear_system(A, y0, 0.0, 1.0)
    assert len(scalar_problems) == 2
    z_end = np.array([sp.exact(1.0)[0] for sp in scalar_problems])
    y_end = recompose(z_end)
    # Triangular system solved by hand: y1 = e^-t, y2 = 2 e^-t.
    assert np.allclose(y_end.real, [np.exp(-1.0), 2.0 * np.exp(-1.0)], atol=1e-10)


def test_problem_library_validation():
    with pytest.raises(ValueError):
        problem_library("unknown")
    with pytest.raises(ValueError):
        problem_library("dahlquist", {"lam": -1.0, "bogus": 3})
    with pytest.raises(ValueError):
        OdeProblem(dimension=1, rhs=lambda x, y: y, x0=1.0, y0=np.array([1.0]), x_end=0.5)


def test_rhs_shape_guard():
    from gearstab.integrate import EvaluationError
    p = OdeProblem(dimension=2, rhs=lambda x, y: np.array([1.0]), x0=0.0,
                   y0=np.zeros(2), x_end=1.0)
    with pytest.raises(EvaluationError):
        p.f(0.0, p.y0)
