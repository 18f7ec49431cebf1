"""Exact-arithmetic checks on the multistep coefficient generators."""
from fractions import Fraction

import pytest

from gearstab.methods import (
    Family,
    adams_moulton_coefficients,
    bdf_coefficients,
    rho_sigma_polynomials,
)


def test_bdf1_is_implicit_euler():
    m = bdf_coefficients(1)
    assert m.alphas == (Fraction(1),)
    assert m.betas == (Fraction(1), Fraction(0))
    assert m.order == 1
    assert m.family is Family.BDF


def test_bdf2_coefficients():
    m = bdf_coefficients(2)
    assert m.alphas == (Fraction(4, 3), Fraction(-1, 3))
    assert m.betas[0] == Fraction(2, 3)


def test_bdf3_coefficients():
    m = bdf_coefficients(3)
    assert m.alphas == (Fraction(18, 11), Fraction(-9, 11), Fraction(2, 11))
    assert m.betas[0] == Fraction(6, 11)


def test_bdf6_beta0_is_reciprocal_harmonic():
    m = bdf_coefficients(6)
    harmonic = sum(Fraction(1, j) for j in range(1, 7))
    assert m.betas[0] == 1 / harmonic == Fraction(20, 49)


def test_bdf7_coefficients():
    m = bdf_coefficients(7)
    assert m.betas[0] == Fraction(140, 363)
    assert m.alphas == (Fraction(980, 363), Fraction(-490, 121), Fraction(4900, 1089),
                        Fraction(-1225, 363), Fraction(196, 121), Fraction(-490, 1089),
                        Fraction(20, 363))


@pytest.mark.parametrize("order", range(1, 8))
def test_bdf_order_conditions(order):
    # The method must reproduce y = x^p exactly for p = 0..order.
    m = bdf_coefficients(order)
    for p in range(order + 1):
        lhs = Fraction(0) ** p if p else Fraction(1)
        rhs = sum(a * Fraction(-i) ** p for i, a in enumerate(m.alphas, start=1))
        rhs += sum(b * p * Fraction(-j) ** (p - 1) for j, b in enumerate(m.betas)) if p else 0
        assert lhs == rhs, f"order condition p={p} failed for BDF{order}"


def test_am0_is_implicit_euler():
    m = adams_moulton_coefficients(0)
    assert m.alphas == (Fraction(1),)
    assert m.betas == (Fraction(1),)
    assert m.order == 1


def test_am1_is_trapezoidal():
    m = adams_moulton_coefficients(1)
    assert m.betas == (Fraction(1, 2), Fraction(1, 2))
    assert m.order == 2


def test_am3_known_weights():
    m = adams_moulton_coefficients(3)
    assert m.betas == (Fraction(9, 24), Fraction(19, 24), Fraction(-5, 24), Fraction(1, 24))


@pytest.mark.parametrize("q", range(6))
def test_am_order_conditions(q):
    m = adams_moulton_coefficients(q)
    for p in range(m.order + 1):
        lhs = Fraction(0) ** p if p else Fraction(1)
        rhs = sum(a * Fraction(-i) ** p for i, a in enumerate(m.alphas, start=1))
        rhs += sum(b * p * Fraction(-j) ** (p - 1) for j, b in enumerate(m.betas)) if p else 0
        assert lhs == rhs


@pytest.mark.parametrize("make,arg", [(bdf_coefficients, 0), (bdf_coefficients, 8),
                                      (adams_moulton_coefficients, -1),
                                      (adams_moulton_coefficients, 6),
                                      (bdf_coefficients, 2.0)])
def test_out_of_range_orders_rejected(make, arg):
    with pytest.raises(ValueError):
        make(arg)


def test_rho_sigma_consistency():
    # rho(1) = 0 and rho'(1) = s(1) for every consistent method.
    for m in [bdf_coefficients(k) for k in range(1, 8)] + \
             [adams_moulton_coefficients(q) for q in range(6)]:
        rho, s = rho_sigma_polynomials(m)
        n = len(rho) - 1
        assert sum(rho) == 0
        drho = sum(c * (n - i) for i, c in enumerate(rho[:-1]))
        assert drho == sum(s)


def test_rho_sigma_cancels_common_z_factor():
    rho, s = rho_sigma_polynomials(adams_moulton_coefficients(3))
    # Stored with padded alphas, so rho and s share a factor of z; after
    # cancellation at least one constant term must be nonzero.
    assert rho[-1] != 0 or s[-1] != 0
    assert len(rho) == 4  # degree 3, the true step number for q=3
