import numpy as np
import pytest

import qglab
from qglab import ModelParams, advection_term, inverse_transform, regularized_gradient_kernel
from qglab.errors import ValidationError
from qglab.models import inverse_symbol, rhs_dissipative, rhs_inviscid, rhs_regularized

from conftest import random_field


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(model="unknown"),
        dict(model="inviscid", kappa=0.1),
        dict(model="inviscid", mu=0.1),
        dict(model="dissipative", kappa=0.0),
        dict(model="dissipative", kappa=0.1, mu=0.5),
        dict(model="regularized", mu=0.0),
        dict(model="regularized", mu=1.0, alpha=0.4),
        dict(model="regularized", mu=1.0, kappa=0.1),
        dict(model="inviscid", alpha=1.5),
    ],
)
def test_model_params_rejects_invalid(kwargs):
    with pytest.raises(ValidationError):
        ModelParams(**kwargs)


def test_forcing_only_for_dissipative(grid16):
    f = qglab.single_mode(grid16, 0, 1)
    with pytest.raises(ValidationError):
        ModelParams("inviscid", forcing=f)
    ModelParams("dissipative", kappa=0.1, forcing=f)


def test_advection_single_mode_is_steady(grid32):
    adv = advection_term(qglab.single_mode(grid32, 1, 0))
    assert np.max(np.abs(adv.coeffs)) < 1e-15


def test_advection_equal_shell_cancels(grid32):
    theta = qglab.single_mode(grid32, 1, 0) + qglab.single_mode(grid32, 0, 1)
    adv = advection_term(theta)
    assert np.max(np.abs(adv.coeffs)) < 1e-14


def test_advection_closed_form(grid32):
    # theta = cos x1 + cos 2x2 has psi = -cos x1 - cos(2 x2)/2,
    # u = (-sin 2x2, sin x1) and div(u theta) = -sin x1 sin 2x2
    theta = qglab.single_mode(grid32, 1, 0) + qglab.single_mode(grid32, 0, 2)
    adv = inverse_transform(advection_term(theta))
    expect = -np.sin(grid32.x1) * np.sin(2 * grid32.x2)
    assert np.max(np.abs(adv.values - expect)) < 1e-12


def test_advection_ignores_mean(grid32):
    theta = qglab.single_mode(grid32, 1, 0) + qglab.single_mode(grid32, 0, 2)
    shifted = theta.copy()
    shifted.coeffs[0, 0] = 3.0  # add a constant background
    a = advection_term(theta)
    b = advection_term(shifted)
    assert b.coeffs[0, 0] == 0.0
    assert np.max(np.abs(a.coeffs - b.coeffs)) < 1e-13


def test_rhs_inviscid_negates_advection(grid32):
    theta = qglab.single_mode(grid32, 1, 0) + qglab.single_mode(grid32, 0, 2)
    out = inverse_transform(rhs_inviscid(theta))
    expect = np.sin(grid32.x1) * np.sin(2 * grid32.x2)
    assert np.max(np.abs(out.values - expect)) < 1e-12


def test_rhs_dissipative_single_mode_decay(grid32):
    p = ModelParams("dissipative", alpha=0.5, kappa=0.1)
    out = inverse_transform(rhs_dissipative(qglab.single_mode(grid32, 2, 0), p))
    expect = -0.2 * np.cos(2 * grid32.x1)  # |k|^(2 alpha) = 2
    assert np.max(np.abs(out.values - expect)) < 1e-13

    p = ModelParams("dissipative", alpha=0.8, kappa=0.3)
    out = inverse_transform(rhs_dissipative(qglab.single_mode(grid32, 1, 0), p))
    expect = -0.3 * np.cos(grid32.x1)  # |k| = 1 for any alpha
    assert np.max(np.abs(out.values - expect)) < 1e-13


def test_rhs_dissipative_forcing_passthrough(grid32):
    forcing = qglab.single_mode(grid32, 0, 1)
    p = ModelParams("dissipative", alpha=0.5, kappa=0.1, forcing=forcing)
    zero = qglab.SpectralField(grid32, np.zeros((32, 32), dtype=complex))
    out = rhs_dissipative(zero, p)
    assert np.max(np.abs(out.coeffs - forcing.coeffs)) < 1e-15


def test_dissipation_alpha_zero_is_plain_damping(grid16):
    # degenerate alpha = 0: multiplier kappa on every mode except k = 0
    from qglab.models import dissipation_symbol

    sym = dissipation_symbol(grid16, 0.4, 0.0)
    assert sym[0, 0] == 0.0
    rest = sym.copy()
    rest[0, 0] = 0.4
    assert np.allclose(rest, 0.4)


def test_kernel_values():
    g1, g2 = regularized_gradient_kernel(1.0, 0.0, mu=0.5, alpha=0.5)
    assert g1 == pytest.approx(1j * 2.0 / 3.0)
    assert g2 == 0.0
    assert abs(g1) <= 1.0 / 0.5

    g1, g2 = regularized_gradient_kernel(0.0, 0.0, mu=0.5, alpha=0.5)
    assert g1 == 0.0 and g2 == 0.0


@pytest.mark.parametrize("alpha", [0.5, 0.75, 1.0])
@pytest.mark.parametrize("mu", [0.1, 1.0])
def test_kernel_bound_on_grid(alpha, mu):
    g = qglab.Grid(128)
    g1, g2 = regularized_gradient_kernel(g.k1, g.k2, mu=mu, alpha=alpha)
    mag = np.hypot(np.abs(g1), np.abs(g2))
    assert np.max(mag) <= 1.0 / mu


def test_rhs_regularized_is_diagonal_inverse_of_inviscid(grid64):
    theta = random_field(grid64, 20, 1.8, 2)
    p = ModelParams("regularized", alpha=0.75, mu=0.3)
    direct = rhs_regularized(theta, p)
    via_inviscid = rhs_inviscid(theta).coeffs * inverse_symbol(grid64, 0.3, 0.75)
    assert np.max(np.abs(direct.coeffs - via_inviscid)) <= 1e-14 * max(
        np.max(np.abs(via_inviscid)), 1e-30
    )


def test_rhs_regularized_closed_form(grid32):
    # nonlinear oracle sin x1 sin 2x2, then mode-wise division by 1 + |k|
    theta = qglab.single_mode(grid32, 1, 0) + qglab.single_mode(grid32, 0, 2)
    p = ModelParams("regularized", alpha=0.5, mu=1.0)
    out = rhs_regularized(theta, p)
    oracle = qglab.forward_transform(
        qglab.PhysicalField(grid32, np.sin(grid32.x1) * np.sin(2 * grid32.x2))
    )
    expect = oracle.coeffs * inverse_symbol(grid32, 1.0, 0.5)
    assert np.max(np.abs(out.coeffs - expect)) < 1e-14
    # the (1, +-2) coefficients are scaled by 1/(1 + sqrt(5))
    k = grid32.kabs[2, 1]
    assert k == pytest.approx(np.sqrt(5.0))
    assert abs(out.coeffs[2, 1]) == pytest.approx(abs(oracle.coeffs[2, 1]) / (1 + np.sqrt(5)), rel=1e-12)


def test_rhs_regularized_vanishes_for_large_mu(grid32):
    theta = qglab.single_mode(grid32, 1, 0) + qglab.single_mode(grid32, 0, 2)
    big = rhs_regularized(theta, ModelParams("regularized", alpha=0.5, mu=1e8))
    small = rhs_regularized(theta, ModelParams("regularized", alpha=0.5, mu=1.0))
    assert np.max(np.abs(big.coeffs)) <= 2e-8 * np.max(np.abs(small.coeffs))


@pytest.mark.parametrize("seed", range(10))
def test_advection_skew_symmetry(grid64, seed):
    # integral div(u theta) theta dx = 0 for dealiased products
    theta = qglab.dealias(random_field(grid64, 20, 1.5, seed))
    adv = advection_term(theta)
    inner = (2 * np.pi) ** 2 * float(np.sum(adv.coeffs * np.conj(theta.coeffs)).real)
    l2sq = qglab.sobolev_norm(theta, 0.0) ** 2
    assert abs(inner) <= 1e-10 * l2sq


@pytest.mark.parametrize("seed", range(5))
def test_rhs_mean_is_conserved(grid64, seed):
    theta = random_field(grid64, 20, 1.5, seed)
    assert rhs_inviscid(theta).coeffs[0, 0] == 0.0
    p = ModelParams("dissipative", alpha=0.7, kappa=0.2)
    assert abs(rhs_dissipative(theta, p).coeffs[0, 0]) == 0.0
    p = ModelParams("regularized", alpha=0.7, mu=0.5)
    assert abs(rhs_regularized(theta, p).coeffs[0, 0]) == 0.0
