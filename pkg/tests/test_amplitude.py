import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbgent.amplitude import (
    PhysicalParams,
    ReservoirParams,
    SteadyStateError,
    alpha_from_physical,
    amplitude_c,
    amplitude_c_erf,
    kernel_G,
    kernel_params_for_amplitude,
    lambda_roots,
    memory_residual,
    plateau_amplitude,
    steady_amplitude,
)

DELTAS = [-20.0, -5.0, -4.0, -1.0, 0.25, 0.5, 1.0]


def test_alpha_from_physical_frozen():
    p = alpha_from_physical(PhysicalParams(omega0=2.0, omega_c=1.5, A=0.3, d=0.1, epsilon0=1.0))
    assert p.alpha_sq == pytest.approx(1.3272236392263164273e-05, rel=1e-14)
    assert p.delta == pytest.approx(0.5)


def test_alpha_scales_as_d_to_the_fourth():
    base = alpha_from_physical(PhysicalParams(2.0, 1.5, 0.3, 0.1, 1.0))
    doubled = alpha_from_physical(PhysicalParams(2.0, 1.5, 0.3, 0.2, 1.0))
    assert doubled.alpha_sq / base.alpha_sq == pytest.approx(16.0, rel=1e-12)


def test_resonant_band_edge_has_zero_detuning():
    assert alpha_from_physical(PhysicalParams(3.0, 3.0, 1.0, 1.0, 1.0)).delta == 0.0


@pytest.mark.parametrize("field", ["omega0", "A", "d", "epsilon0"])
def test_physical_inputs_must_be_positive(field):
    values = dict(omega0=2.0, omega_c=1.5, A=0.3, d=0.1, epsilon0=1.0)
    values[field] = 0.0 if field in ("omega0", "d", "epsilon0") else -1.0
    with pytest.raises(ValueError):
        alpha_from_physical(PhysicalParams(**values))


@pytest.mark.parametrize("alpha_sq", [0.0, -1.0, float("nan"), float("inf")])
def test_reservoir_rejects_bad_alpha(alpha_sq):
    with pytest.raises(ValueError):
        ReservoirParams(alpha_sq, 0.0)


def test_scaled_and_dimensionless():
    p = ReservoirParams(4.0, -8.0)
    assert p.alpha == 2.0
    assert p.delta_over_alpha_sq == -2.0
    assert p.dimensionless() == ReservoirParams.scaled(-2.0)


def test_roots_real_and_complex():
    r = lambda_roots(ReservoirParams.scaled(-2.0))
    assert r.lambda_plus == pytest.approx(1.0)
    assert r.lambda_minus == pytest.approx(-2.0)
    r = lambda_roots(ReservoirParams.scaled(1.0))
    assert r.lambda_plus == pytest.approx(complex(-0.5, math.sqrt(3) / 2))
    assert r.lambda_minus == pytest.approx(complex(-0.5, -math.sqrt(3) / 2))


@given(st.floats(0.01, 100.0), st.floats(-50.0, 50.0))
def test_roots_satisfy_vieta(alpha_sq, delta):
    p = ReservoirParams(alpha_sq, delta)
    r = lambda_roots(p)
    assert abs(r.lambda_plus + r.lambda_minus + p.alpha) <= 1e-12 * max(1.0, p.alpha)
    assert abs(r.lambda_plus * r.lambda_minus - delta) <= 1e-10 * max(1.0, abs(delta), alpha_sq)


@pytest.mark.parametrize("delta", DELTAS)
def test_initial_condition(delta):
    assert abs(amplitude_c(0.0, ReservoirParams.scaled(delta)) - 1.0) <= 1e-12


def test_initial_condition_at_double_root():
    assert abs(amplitude_c(0.0, ReservoirParams.scaled(0.25)) - 1.0) <= 1e-14


@pytest.mark.parametrize("delta", DELTAS)
def test_amplitude_bounded_after_transient(delta):
    t = np.linspace(1.0, 60.0, 3000)
    assert np.max(np.abs(amplitude_c(t, ReservoirParams.scaled(delta)))) <= 1.0 + 1e-6


def test_continuous_through_double_root():
    t = np.linspace(0.0, 20.0, 401)
    mid = amplitude_c(t, ReservoirParams.scaled(0.25))
    for eps in (1e-6, -1e-6):
        near = amplitude_c(t, ReservoirParams.scaled(0.25 + eps))
        assert np.max(np.abs(near - mid)) <= 1e-4


def test_only_ratio_matters():
    t = np.linspace(0.0, 10.0, 21)
    a = amplitude_c(t, ReservoirParams(1.0, -1.0))
    b = amplitude_c(t, ReservoirParams(9.0, -9.0))
    assert np.max(np.abs(a - b)) <= 1e-15


def test_scalar_and_vector_agree():
    p = ReservoirParams.scaled(-1.0)
    vec = amplitude_c(np.array([0.5, 3.0]), p)
    assert isinstance(amplitude_c(3.0, p), complex)
    assert amplitude_c(3.0, p) == vec[1]


def test_literal_erf_form_agrees_at_moderate_times():
    t = np.linspace(0.0, 4.0, 41)
    for delta in (-4.0, -1.0, 1.0):
        p = ReservoirParams.scaled(delta)
        assert np.max(np.abs(amplitude_c(t, p) - amplitude_c_erf(t, p))) <= 1e-9


@pytest.mark.parametrize("bad", [-1.0, float("nan")])
def test_negative_time_rejected(bad):
    with pytest.raises(ValueError):
        amplitude_c(bad, ReservoirParams.scaled(1.0))


@pytest.mark.parametrize("delta", [-4.0, -1.0, 0.5, 1.0])
@pytest.mark.parametrize("t", [2.0, 5.0, 10.0])
def test_memory_equation_residual(delta, t):
    assert memory_residual(t, ReservoirParams.scaled(delta)) <= 1e-2


def test_residual_with_literal_kernel_strength_is_large():
    # the closed form solves the equation for the rescaled kernel only
    p = ReservoirParams.scaled(1.0)
    assert memory_residual(5.0, p, kernel_params=p) > 1.0


def test_residual_in_physical_units():
    p = ReservoirParams(4.0, 4.0)
    kp = kernel_params_for_amplitude(p)
    assert memory_residual(5.0, p, kernel_params=kp) == pytest.approx(
        memory_residual(5.0, ReservoirParams.scaled(1.0)), abs=1e-9)


def test_kernel_modulus_and_phase():
    p = ReservoirParams(4.0, -1.0)
    tau = np.array([0.3, 1.0, 2.5])
    g = kernel_G(tau, p)
    assert np.allclose(np.abs(g), 2.0 * tau**-1.5, rtol=1e-14)
    expected = np.angle(np.exp(1j * (-tau + 1.25 * math.pi)))
    assert np.allclose(np.angle(g), expected, atol=1e-14)


@pytest.mark.parametrize("tau", [0.0, -1.0])
def test_kernel_requires_positive_lag(tau):
    with pytest.raises(ValueError):
        kernel_G(tau, ReservoirParams.scaled(1.0))


def test_kernel_rescaling():
    kp = kernel_params_for_amplitude(ReservoirParams(2.0, 3.0))
    assert kp.alpha == pytest.approx(math.sqrt(2.0) / (2.0 * math.sqrt(math.pi)))
    assert kp.delta == 3.0


@pytest.mark.parametrize("delta", [0.25, 0.5, 1.0])
def test_no_plateau_outside_gap(delta):
    p = ReservoirParams.scaled(delta)
    assert steady_amplitude(p) == 0.0
    assert plateau_amplitude(p) == 0.0
    assert abs(amplitude_c(400.0, p)) <= 1e-3


def test_band_edge_decays_as_inverse_root_time():
    # at delta = 0 one root vanishes and |c| ~ 1 / sqrt(pi t)
    p = ReservoirParams.scaled(0.0)
    assert steady_amplitude(p) == 0.0
    for t in (400.0, 1600.0):
        assert abs(amplitude_c(t, p)) == pytest.approx(1.0 / math.sqrt(math.pi * t), rel=1e-2)


@pytest.mark.parametrize("delta, expected", [(-1.0, 0.55278640450004206), (-4.0, 0.75746437496366703),
                                             (-5.0, 0.78178210976400762), (-20.0, 0.88888888888888884)])
def test_plateau_values(delta, expected):
    p = ReservoirParams.scaled(delta)
    assert plateau_amplitude(p) == pytest.approx(expected, rel=1e-12)
    assert steady_amplitude(p) == pytest.approx(expected, abs=1e-3)


def test_plateau_grows_with_gap_depth():
    values = [steady_amplitude(ReservoirParams.scaled(d)) for d in (-1.0, -4.0, -5.0, -20.0)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_steady_state_gives_up():
    with pytest.raises(SteadyStateError):
        steady_amplitude(ReservoirParams.scaled(-1e-4), t_max=20.0, tol=1e-12)


@settings(max_examples=30)
@given(st.floats(-30.0, -0.05))
def test_plateau_matches_late_amplitude(delta):
    p = ReservoirParams.scaled(delta)
    # power-law tail ~ t^(-3/2) with an O(1/|root gap|) prefactor
    late = abs(amplitude_c(2.0e4, p))
    assert late == pytest.approx(plateau_amplitude(p), abs=2e-3)
