"""Coefficient generation for BDF (Gear) and Adams-Moulton linear multistep methods.

All coefficients are derived in exact rational arithmetic from their generating
relations (backward-difference expansion for BDF, polynomial quadrature for
Adams-Moulton), never transcribed from tables.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb

MAX_BDF_ORDER = 7
MAX_AM_Q = 5


class Family(Enum):
    BDF = "bdf"
    ADAMS_MOULTON = "adams-moulton"


@dataclass(frozen=True)
class LinearMultistepMethod:
    """Multistep method in the normalized form

        y_{n+1} = sum_{i>=1} alpha_i y_{n+1-i} + h sum_{j>=0} beta_j f_{n+1-j}

    with the coefficient of y_{n+1} equal to one.  ``alphas`` holds
    alpha_1..alpha_k, ``betas`` holds beta_0..beta_m.  One implicit stepper
    serves both families through this form.
    """

    alphas: tuple[Fraction, ...]
    betas: tuple[Fraction, ...]
    order: int
    family: Family

    @property
    def steps(self) -> int:
        return len(self.alphas)


def bdf_coefficients(order: int) -> LinearMultistepMethod:
    """Gear method (backward differentiation formula) of the given order, 1..7.

    Derived from sum_{j=1}^{q} (1/j) nabla^j y_{n+1} = h f_{n+1} and
    normalized so the coefficient of y_{n+1} is 1; hence
    beta_0 = 1 / (1 + 1/2 + ... + 1/q).
    """
    if not isinstance(order, int) or not 1 <= order <= MAX_BDF_ORDER:
        raise ValueError(f"BDF order must be an integer in 1..{MAX_BDF_ORDER}, got {order!r}")
    q = order
    # c[m] multiplies y_{n+1-m} in the backward-difference expansion.
    c = [Fraction(0)] * (q + 1)
    for j in range(1, q + 1):
        for m in range(j + 1):
            c[m] += Fraction((-1) ** m * comb(j, m), j)
    harmonic = c[0]  # = 1 + 1/2 + ... + 1/q
    alphas = tuple(-cm / harmonic for cm in c[1:])
    betas = (1 / harmonic,) + (Fraction(0),) * q
    return LinearMultistepMethod(alphas=alphas, betas=betas, order=q, family=Family.BDF)


def _lagrange_integral_weights(q: int) -> tuple[Fraction, ...]:
    """Integrals over [0, 1] of the Lagrange basis on nodes t_j = 1 - j, j=0..q."""
    nodes = [Fraction(1 - j) for j in range(q + 1)]
    weights = []
    for i in range(q + 1):
        # Basis polynomial prod_{j != i} (t - t_j), ascending coefficients,
        # and its scaling denominator prod_{j != i} (t_i - t_j).
        poly = [Fraction(1)]
        denom = Fraction(1)
        for j in range(q + 1):
            if j == i:
                continue
            shifted = [Fraction(0)] + poly
            scaled = [-nodes[j] * ck for ck in poly] + [Fraction(0)]
            poly = [a + b for a, b in zip(shifted, scaled)]
            denom *= nodes[i] - nodes[j]
        integral = sum(ck / (k + 1) for k, ck in enumerate(poly))
        weights.append(integral / denom)
    return tuple(weights)


def adams_moulton_coefficients(q: int) -> LinearMultistepMethod:
    """Adams-Moulton implicit method with q+1 derivative terms, order q+1 (q in 0..5).

    beta_j is the integral over one step of the Lagrange interpolant of f
    through x_{n+1}, x_n, ..., x_{n-q+1}; q=0 is implicit Euler and q=1 the
    trapezoidal method.
    """
    if not isinstance(q, int) or not 0 <= q <= MAX_AM_Q:
        raise ValueError(f"Adams-Moulton q must be an integer in 0..{MAX_AM_Q}, got {q!r}")
    betas = _lagrange_integral_weights(q)
    alphas = (Fraction(1),) + (Fraction(0),) * q
    return LinearMultistepMethod(alphas=alphas, betas=betas, order=q + 1,
                                 family=Family.ADAMS_MOULTON)


def rho_sigma_polynomials(
    method: LinearMultistepMethod,
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Characteristic polynomials (rho, s), coefficients in descending degree.

    rho(z) = z^k - sum alpha_i z^{k-i}, s(z) = sum beta_j z^{k-j} with
    k = method.steps.  A common factor of z (both constant terms zero, as for
    Adams-Moulton methods stored with padded alphas) is cancelled so the
    polynomials match the method's true step number.
    """
    k = method.steps
    rho = [Fraction(0)] * (k + 1)
    rho[0] = Fraction(1)
    for i, a in enumerate(method.alphas, start=1):
        rho[i] = -a
    s = [Fraction(0)] * (k + 1)
    for j, b in enumerate(method.betas):
        s[j] += b
    while len(rho) > 2 and rho[-1] == 0 and s[-1] == 0:
        rho.pop()
        s.pop()
    return tuple(rho), tuple(s)
