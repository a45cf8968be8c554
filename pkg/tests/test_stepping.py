import numpy as np
import pytest

import qglab
from qglab import ModelParams, StepperConfig, picard_solve, run, step
from qglab.errors import NoContraction, UnstableStep, ValidationError
from qglab.models import dissipation_symbol
from qglab.stepping import cumulative_simpson, continue_solution, etd_rk4_step

from conftest import random_field


def test_config_validation():
    with pytest.raises(ValidationError):
        StepperConfig(dt=0.0, t_end=1.0)
    with pytest.raises(ValidationError):
        StepperConfig(dt=1e-3, t_end=1.0, scheme="euler")
    with pytest.raises(ValidationError):
        StepperConfig(dt=1e-3, t_end=1.0, diag_every=0)


def test_step_dissipative_single_mode_exact(grid32):
    p = ModelParams("dissipative", alpha=0.5, kappa=0.1)
    theta = qglab.single_mode(grid32, 2, 0)
    for dt in (1e-3, 0.05, 0.7):
        out = step(theta, p, dt)
        expect = np.exp(-0.2 * dt) * np.cos(2 * grid32.x1)
        got = qglab.inverse_transform(out).values
        assert np.max(np.abs(got - expect)) < 1e-12


def test_step_steady_states(grid32):
    theta = qglab.single_mode(grid32, 1, 0)
    out = step(theta, ModelParams("inviscid"), 0.01)
    assert np.max(np.abs(out.coeffs - theta.coeffs)) < 1e-14
    out = step(theta, ModelParams("regularized", alpha=0.5, mu=1.0), 0.01)
    assert np.max(np.abs(out.coeffs - theta.coeffs)) < 1e-14


def test_etd_linear_exactness(grid32):
    # with the nonlinear part disabled, the dissipative evolution matches
    # exp(-kappa |k|^(2 alpha) t) per mode after many steps
    kappa, alpha, dt, nsteps = 0.4, 0.75, 1e-3, 1000
    lin = -dissipation_symbol(grid32, kappa, alpha)
    eh, ef = np.exp(0.5 * dt * lin), np.exp(dt * lin)
    zero = lambda c: 0.0 * c
    theta = random_field(grid32, 10, 1.5, 0)
    c = theta.coeffs.copy()
    for _ in range(nsteps):
        c = etd_rk4_step(c, eh, ef, zero, dt)
    expect = np.exp(lin * dt * nsteps) * theta.coeffs
    assert np.max(np.abs(c - expect)) <= 1e-12 * np.max(np.abs(theta.coeffs))


def test_unstable_step_raises(grid32):
    theta = 1e3 * qglab.cmt(grid32)
    cfg = StepperConfig(dt=50.0, t_end=500.0, scheme="rk4", diag_every=1)
    with pytest.raises(UnstableStep) as info:
        run(theta, ModelParams("inviscid"), cfg)
    assert info.value.t > 0.0


def test_run_deterministic(grid32):
    theta = random_field(grid32, 10, 2.0, 5)
    p = ModelParams("dissipative", alpha=0.5, kappa=0.05)
    cfg = StepperConfig(dt=1e-2, t_end=0.3, diag_every=10)
    a = run(theta, p, cfg)
    b = run(theta, p, cfg)
    assert np.array_equal(a.final.coeffs, b.final.coeffs)
    assert a.records[-1].energy == b.records[-1].energy


def test_run_inviscid_conservation(grid64):
    # |theta(1)|_2 / |theta_0|_2 within 1e-6 of 1 on the cmt datum
    cfg = StepperConfig(dt=1e-3, t_end=1.0, scheme="rk4", diag_every=100)
    res = run(qglab.cmt(grid64), ModelParams("inviscid"), cfg)
    ratio = res.records[-1].lp[2.0] / res.records[0].lp[2.0]
    assert abs(ratio - 1.0) <= 1e-6


def test_run_dissipative_energy_monotone(grid64):
    p = ModelParams("dissipative", alpha=0.5, kappa=0.1)
    cfg = StepperConfig(dt=1e-3, t_end=0.5, diag_every=25)
    res = run(qglab.cmt(grid64), p, cfg)
    l2 = [r.lp[2.0] for r in res.records]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(l2, l2[1:]))


def test_run_regularized_modified_energy(grid64):
    p = ModelParams("regularized", alpha=0.5, mu=1.0)
    cfg = StepperConfig(dt=1e-3, t_end=1.0, scheme="rk4", diag_every=100)
    res = run(qglab.cmt(grid64), p, cfg)
    me = [r.mod_energy for r in res.records]
    assert max(abs(v / me[0] - 1.0) for v in me) <= 1e-6


def test_run_records_final_time(grid32):
    cfg = StepperConfig(dt=1e-2, t_end=0.25, diag_every=7)
    res = run(qglab.single_mode(grid32, 1, 0), ModelParams("inviscid"), cfg)
    assert res.records[-1].t == pytest.approx(0.25)


def test_cumulative_simpson_exact_on_cubics():
    h = 0.1
    t = np.arange(11) * h
    vals = (3 * t**3 - t**2 + 2 * t - 5).reshape(-1, 1, 1)
    exact = (0.75 * t**4 - t**3 / 3 + t**2 - 5 * t).reshape(-1, 1, 1)
    out = cumulative_simpson(vals, h)
    assert np.max(np.abs(out - exact)) < 1e-12


def test_picard_requires_regularized_and_s(grid32):
    theta = qglab.single_mode(grid32, 1, 0)
    with pytest.raises(ValidationError):
        picard_solve(theta, ModelParams("inviscid"), s=2.0)
    p = ModelParams("regularized", alpha=0.5, mu=1.0)
    with pytest.raises(ValidationError):
        picard_solve(theta, p, s=0.5)
    with pytest.raises(ValidationError):
        picard_solve(theta, p, s=2.0, nodes=11)


def test_picard_steady_datum_converges_immediately(grid32):
    p = ModelParams("regularized", alpha=0.5, mu=1.0)
    traj, cert = picard_solve(qglab.single_mode(grid32, 1, 0), p, s=2.0)
    assert cert.converged
    assert cert.iterations == 1
    assert cert.T == pytest.approx(p.mu / (4.0 * cert.R))


@pytest.mark.parametrize("alpha", [0.5, 0.75])
def test_picard_contraction_certificate(grid64, alpha):
    p = ModelParams("regularized", alpha=alpha, mu=1.0)
    traj, cert = picard_solve(qglab.cmt(grid64), p, s=2.0, tol=1e-9)
    assert cert.converged
    assert cert.nodes >= 33
    assert cert.ratios and all(r <= 0.55 for r in cert.ratios)


def test_picard_cross_validates_against_run(grid64):
    p = ModelParams("regularized", alpha=0.5, mu=1.0)
    traj, cert = picard_solve(qglab.cmt(grid64), p, s=2.0, tol=1e-10)
    nsteps = (cert.nodes - 1) * 4
    cfg = StepperConfig(
        dt=cert.T / nsteps, t_end=cert.T, scheme="rk4", diag_every=nsteps, snapshot_every=4
    )
    res = run(qglab.cmt(grid64), p, cfg)
    assert len(res.samples) == len(traj.states)
    sup = max(
        qglab.sobolev_norm(state - ps, 2.0)
        for (_, state), ps in zip(res.samples, traj.states)
    )
    assert sup <= 1e-4


def test_continue_solution_steady_reaches_horizon(grid16):
    p = ModelParams("regularized", alpha=0.5, mu=1.0)
    sol = continue_solution(qglab.single_mode(grid16, 1, 0), p, s=2.0, horizon=10.0)
    assert sol.times[-1] == pytest.approx(10.0, abs=1e-9)
    assert all(c.converged for c in sol.certificates)


def test_continue_solution_single_segment_when_horizon_short(grid16):
    p = ModelParams("regularized", alpha=0.5, mu=1.0)
    theta = qglab.single_mode(grid16, 1, 0)
    _, cert = picard_solve(theta, p, s=2.0)
    sol = continue_solution(theta, p, s=2.0, horizon=cert.T / 3.0)
    assert len(sol.certificates) == 1
    assert sol.times[-1] == pytest.approx(cert.T / 3.0)


def test_continue_solution_matches_run(grid32):
    # alpha = 3/4 stays globally bounded; cross-check the chained Picard
    # trajectory against the marching integrator at the shared horizon
    p = ModelParams("regularized", alpha=0.75, mu=1.0)
    theta = qglab.cmt(grid32)
    horizon = 2.0
    sol = continue_solution(theta, p, s=2.0, horizon=horizon, tol=1e-8)
    assert sol.times[-1] == pytest.approx(horizon, abs=1e-9)
    hs = [qglab.sobolev_norm(state, 2.0) for state in sol.states[:: len(sol.states) // 50 + 1]]
    assert max(hs) <= 10.0 * hs[0]  # bounded, no blow-up on [0, 2]
    cfg = StepperConfig(dt=1e-3, t_end=horizon, scheme="rk4", diag_every=1000)
    res = run(theta, p, cfg)
    final_gap = qglab.sobolev_norm(sol.states[-1] - res.final, 2.0)
    assert final_gap <= 1e-3
