"""Why implicit methods matter on stiff problems, in one experiment.

The model equation y' = lambda y with lambda = -1e6 decays to zero almost
instantly, yet explicit Euler with h = 0.1 sits far outside its stability
region (|1 + h lambda| = 99999) and the iterates explode geometrically.
BDF1 (implicit Euler) with the very same step size damps every mode:
|y_{n+1}| = |y_n| / |1 - h lambda| shrinks by five orders of magnitude per
step.  Stability, not accuracy, is what separates the two.

    python demos/stiff_contrast.py
"""
import numpy as np

from gearstab import Family, SolverConfig, integrate_fixed, problem_library

problem = problem_library("dahlquist", {"lam": -1e6, "x_end": 2.0})

euler = integrate_fixed(problem, "euler", 1, 0.1)
bdf1 = integrate_fixed(problem, Family.BDF, 1, 0.1,
                       SolverConfig(newton_tol=1e-8, h_init=0.1, h_max=1.0))

print(f"{'step':>4} {'x':>6} {'|y| explicit Euler':>20} {'|y| BDF1':>14}")
for n in range(0, 21, 2):
    ye = abs(euler.ys[n][0])
    yb = abs(bdf1.ys[n][0])
    print(f"{n:>4} {euler.xs[n]:>6.1f} {ye:>20.6g} {yb:>14.6g}")

mags_e = [abs(y[0]) for y in euler.ys[:21]]
mags_b = [abs(y[0]) for y in bdf1.ys]
print()
print(f"explicit Euler exceeds |y| = 1e10 within 20 steps: {max(mags_e) > 1e10}")
print(f"BDF1 strictly monotone decay over all {len(mags_b) - 1} steps: "
      f"{all(b < a for a, b in zip(mags_b, mags_b[1:]))}")
print(f"true solution at x = 2: {np.exp(-1e6 * 2.0):.3g}")
