"""
Tests for Berry connections, loop phases, the monopole picture and the Renner-Teller family
"""
import math

import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st

from eigen import jacobi_eigensystem
from errors import (
    DiracStringError,
    InsideSphereError,
    InsufficientResolutionError,
    InvalidParameterError,
    OnDegeneracySphereError,
    SphereCrossingError,
)
from geometric import (
    ParamPath,
    berry_connection,
    berry_curvature,
    cap_flux,
    chern_number,
    circle_path,
    loop_phase_analytic,
    monopole_field,
    monopole_flux,
    open_path_phase,
    path_ground_states,
    renner_teller_energies,
    renner_teller_ground_state,
    renner_teller_loop_phase,
    single_spin_connection,
    single_spin_loop_phase,
    solid_angle,
    wilson_loop_from_states,
    wilson_loop_phase,
    wilson_product_phase,
)
from model import SphericalParams, build_x_rotated_hamiltonian


class TestConnection:

    def test_outside_value(self):
        assert berry_connection(2.0, math.pi / 2) == pytest.approx(-0.5, abs=1e-15)

    def test_inside_vanishes(self):
        assert berry_connection(0.5, math.pi / 2) == 0.0

    def test_pole_limit(self):
        assert berry_connection(2.0, 0.0) == 0.0
        assert abs(berry_connection(2.0, 1e-8)) < 1e-8

    @seed(31)
    @given(r=st.floats(min_value=1.01, max_value=10.0),
           theta=st.floats(min_value=0.01, max_value=math.pi - 0.01))
    def test_displayed_form(self, r, theta):
        displayed = -(2.0 / (r * math.sin(theta))) * math.sin(theta / 2) ** 2
        assert berry_connection(r, theta) == pytest.approx(displayed, rel=1e-12)

    @seed(32)
    @given(r=st.floats(min_value=1.01, max_value=10.0),
           theta=st.floats(min_value=0.0, max_value=math.pi - 0.01))
    def test_twice_the_single_spin(self, r, theta):
        assert berry_connection(r, theta) == 2.0 * single_spin_connection(r, theta)

    def test_single_spin_displayed_form(self):
        r, theta = 1.7, 1.1
        expected = -math.sin(theta / 2) ** 2 / (r * math.sin(theta))
        assert single_spin_connection(r, theta) == pytest.approx(expected, rel=1e-14)

    def test_on_sphere(self):
        with pytest.raises(OnDegeneracySphereError):
            berry_connection(1.0, 0.5)
        with pytest.raises(OnDegeneracySphereError):
            berry_connection(1.0 + 1e-10, 0.5)

    def test_dirac_string(self):
        with pytest.raises(DiracStringError):
            berry_connection(2.0, math.pi)
        with pytest.raises(DiracStringError):
            berry_connection(2.0, math.pi - 1e-10)

    def test_invalid_inputs(self):
        with pytest.raises(InvalidParameterError):
            berry_connection(-2.0, 0.5)
        with pytest.raises(InvalidParameterError):
            berry_connection(2.0, -0.1)


class TestAnalyticLoop:

    def test_values(self):
        assert loop_phase_analytic(0.5, math.pi / 3) == 0.0
        assert loop_phase_analytic(2.0, math.pi / 2) == pytest.approx(-2 * math.pi)
        assert loop_phase_analytic(2.0, math.pi / 3) == pytest.approx(-math.pi)

    def test_is_minus_solid_angle(self):
        for theta in (0.2, 1.0, 2.5):
            assert loop_phase_analytic(3.0, theta) == -solid_angle(theta)

    def test_on_sphere(self):
        with pytest.raises(OnDegeneracySphereError):
            loop_phase_analytic(1.0, 0.5)


class TestWilsonLoop:

    def test_outside_third(self):
        result = wilson_loop_phase(circle_path(2.0, math.pi / 3, 2000))
        assert result.phase == pytest.approx(-math.pi, abs=1e-3)
        assert result.segment_count == 2000
        assert result.max_segment_phase < math.pi / 2

    def test_outside_equator_is_unwrapped(self):
        result = wilson_loop_phase(circle_path(2.0, math.pi / 2, 2000))
        assert result.phase == pytest.approx(-2 * math.pi, abs=1e-3)

    @pytest.mark.parametrize('theta', [0.3, math.pi / 3, math.pi / 2, 2.5])
    def test_inside_vanishes(self, theta):
        result = wilson_loop_phase(circle_path(0.5, theta, 2000))
        assert result.phase == pytest.approx(0.0, abs=1e-6)

    def test_quadratic_convergence(self):
        exact = loop_phase_analytic(2.0, math.pi / 3)
        errors = [abs(wilson_loop_phase(circle_path(2.0, math.pi / 3, n)).phase - exact)
                  for n in (500, 1000, 2000)]
        assert 3.5 <= errors[0] / errors[1] <= 4.5
        assert 3.5 <= errors[1] / errors[2] <= 4.5

    def test_gauge_invariance(self):
        rng = np.random.default_rng(77)
        for r, theta in [(2.0, math.pi / 3), (2.0, math.pi / 2), (0.5, 1.0), (3.0, 2.0)]:
            path = circle_path(r, theta, 400)
            states = path_ground_states(path)
            reference = path.reference_vector()
            rephased = [state * np.exp(1j * rng.uniform(0, 2 * math.pi)) for state in states]
            baseline = wilson_loop_from_states(states, reference).phase
            assert abs(wilson_loop_from_states(rephased, reference).phase - baseline) < 1e-10
            assert baseline == wilson_loop_phase(path).phase

    def test_reference_phase_does_not_matter(self):
        path = circle_path(2.0, 1.0, 300)
        states = path_ground_states(path)
        reference = path.reference_vector()
        shifted = wilson_loop_from_states(states, reference * np.exp(0.9j)).phase
        assert shifted == pytest.approx(wilson_loop_from_states(states, reference).phase, abs=1e-12)

    def test_double_traversal(self):
        once = wilson_loop_phase(circle_path(2.0, math.pi / 3, 500)).phase
        twice = wilson_loop_phase(circle_path(2.0, math.pi / 3, 500, turns=2)).phase
        assert twice == pytest.approx(2 * once, abs=1e-6)

    def test_product_phase_agrees_modulo_two_pi(self):
        for theta in (0.4, math.pi / 2, 2.2):
            path = circle_path(2.0, theta, 1000)
            unwrapped = wilson_loop_phase(path).phase
            wrapped = wilson_product_phase(path_ground_states(path))
            assert -math.pi <= wrapped <= math.pi
            assert abs(np.angle(np.exp(1j * (unwrapped - wrapped)))) < 1e-9

    def test_coarse_path_is_rejected(self):
        with pytest.raises(InsufficientResolutionError) as info:
            wilson_loop_phase(circle_path(2.0, 2.5, 4))
        assert abs(info.value.segment_phase) >= math.pi / 2

    def test_dirac_string_circuit(self):
        with pytest.raises(DiracStringError):
            wilson_loop_phase(circle_path(2.0, math.pi - 1e-7, 100))

    def test_on_sphere_path(self):
        with pytest.raises(OnDegeneracySphereError):
            circle_path(1.0, 1.0, 100)

    def test_sphere_crossing(self):
        points = (SphericalParams(0.5, 1.0, 0.0),
                  SphericalParams(2.0, 1.0, 1.0),
                  SphericalParams(2.0, 1.0, 2.0))
        with pytest.raises(SphereCrossingError):
            wilson_loop_phase(ParamPath(points))

    def test_malformed_paths(self):
        with pytest.raises(InvalidParameterError):
            ParamPath((SphericalParams(2.0, 1.0, 0.0), SphericalParams(2.0, 1.0, 1.0)))
        repeated = SphericalParams(2.0, 1.0, 0.0)
        with pytest.raises(InvalidParameterError):
            ParamPath((repeated, repeated, SphericalParams(2.0, 1.0, 1.0)))
        with pytest.raises(InvalidParameterError):
            circle_path(2.0, 1.0, 2)

    def test_open_path_rejected(self):
        path = ParamPath((SphericalParams(2.0, 1.0, 0.0), SphericalParams(2.0, 1.0, 1.0)), closed=False)
        with pytest.raises(InvalidParameterError):
            wilson_loop_phase(path)


class TestSingleSpin:

    def test_half_of_the_two_qubit_phase(self):
        single = single_spin_loop_phase(math.pi / 3, 2000).phase
        assert single == pytest.approx(-math.pi / 2, abs=1e-3)
        double = wilson_loop_phase(circle_path(2.0, math.pi / 3, 2000)).phase
        assert double == pytest.approx(2 * single, abs=2e-3)

    def test_pole(self):
        assert single_spin_loop_phase(0.0, 200).phase == pytest.approx(0.0, abs=1e-12)


class TestOpenPath:

    def test_half_rotation(self):
        result = open_path_phase(2.0, math.pi / 2, 0.0, math.pi, 1000)
        assert result.phase == pytest.approx(-math.pi, abs=1e-12)

    def test_half_rotation_at_third(self):
        result = open_path_phase(2.0, math.pi / 3, 0.0, math.pi, 1000)
        assert result.phase == pytest.approx(-math.pi / 2, abs=1e-12)

    def test_every_arc_contributes_equally(self):
        segments = 400
        result = open_path_phase(3.0, 1.2, 0.5, 2.5, segments)
        expected = -(1 - math.cos(1.2)) * 2.0
        assert result.phase == pytest.approx(expected, abs=1e-12)
        assert result.max_segment_phase == pytest.approx(abs(expected) / segments, rel=1e-12)

    def test_empty_arc(self):
        result = open_path_phase(2.0, math.pi / 3, 0.0, 0.0, 100)
        assert result.phase == 0.0
        assert result.max_segment_phase == 0.0

    def test_reversed_arc(self):
        forward = open_path_phase(2.0, 1.0, 0.0, 2.0, 200).phase
        backward = open_path_phase(2.0, 1.0, 2.0, 0.0, 200).phase
        assert backward == pytest.approx(-forward, abs=1e-14)

    def test_inside(self):
        with pytest.raises(InsideSphereError):
            open_path_phase(0.5, 1.0, 0.0, math.pi, 100)

    def test_on_sphere(self):
        with pytest.raises(OnDegeneracySphereError):
            open_path_phase(1.0, 1.0, 0.0, math.pi, 100)

    def test_too_few_segments(self):
        with pytest.raises(InvalidParameterError):
            open_path_phase(2.0, 1.0, 0.0, math.pi, 99)

    def test_theta_on_pole(self):
        with pytest.raises(InvalidParameterError):
            open_path_phase(2.0, 0.0, 0.0, math.pi, 100)


class TestMonopole:

    def test_field(self):
        assert monopole_field(2.0) == -0.5
        assert monopole_field(0.5) == 0.0
        assert monopole_field(1 + 1e-6) == pytest.approx(-2 / (1 + 1e-6) ** 2)

    def test_field_on_sphere(self):
        with pytest.raises(OnDegeneracySphereError):
            monopole_field(1.0)

    @pytest.mark.parametrize('r', [1.5, 3.0])
    def test_flux(self, r):
        flux = monopole_flux(r, 256, 256)
        assert abs(flux - (-8 * math.pi)) / (8 * math.pi) < 1e-6

    def test_flux_is_radius_independent(self):
        inner = monopole_flux(1.5, 256, 256)
        outer = monopole_flux(3.0, 256, 256)
        assert abs(inner - outer) / abs(inner) < 1e-9

    def test_flux_inside(self):
        with pytest.raises(InsideSphereError):
            monopole_flux(0.5, 256, 256)
        with pytest.raises(InsideSphereError):
            monopole_flux(1.0, 256, 256)

    def test_flux_grid_validated(self):
        with pytest.raises(InvalidParameterError):
            monopole_flux(2.0, 8, 256)

    @pytest.mark.parametrize('theta', [0.0, 0.3, math.pi / 2, 2.5, 3.0])
    def test_curvature(self, theta):
        assert berry_curvature(2.0, theta) == pytest.approx(-0.25, rel=1e-8)

    @pytest.mark.parametrize('r', [1.2, 2.0, 5.0])
    def test_field_is_twice_the_curvature(self, r):
        assert monopole_field(r) == pytest.approx(2.0 * berry_curvature(r, 1.0), rel=1e-8)

    def test_curvature_inside(self):
        assert berry_curvature(0.5, 1.0) == 0.0

    @pytest.mark.parametrize('r, theta', [(2.0, math.pi / 3), (2.0, math.pi / 2), (4.0, 2.8), (0.5, 1.0)])
    def test_stokes(self, r, theta):
        assert cap_flux(r, theta, 64, 64) == pytest.approx(loop_phase_analytic(r, theta), abs=1e-4)

    def test_stokes_against_wilson_loop(self):
        numeric = wilson_loop_phase(circle_path(2.0, 1.2, 2000)).phase
        assert cap_flux(2.0, 1.2, 64, 64) == pytest.approx(numeric, abs=1e-4)


class TestChern:

    @pytest.mark.parametrize('r', [1.5, 2.0, 10.0])
    def test_outside(self, r):
        assert chern_number(r, 24, 24) == pytest.approx(-2.0, abs=1e-9)

    def test_inside(self):
        assert chern_number(0.5, 16, 16) == pytest.approx(0.0, abs=1e-12)

    def test_on_sphere(self):
        with pytest.raises(OnDegeneracySphereError):
            chern_number(1.0)

    def test_grid_validated(self):
        with pytest.raises(InvalidParameterError):
            chern_number(2.0, 4, 16)


class TestRennerTeller:

    def test_zero_rotation(self):
        state = renner_teller_ground_state(1.0, 0.0)
        np.testing.assert_allclose(state.amplitudes,
                                   [math.cos(math.pi / 8), 0, 0, math.sin(math.pi / 8)], atol=1e-15)

    def test_full_turn_has_no_sign_flip(self):
        start = renner_teller_ground_state(1.0, 0.0)
        end = renner_teller_ground_state(1.0, 2 * math.pi)
        np.testing.assert_allclose(end.amplitudes, start.amplitudes, rtol=0, atol=1e-12)

    def test_periodicity_random(self):
        rng = np.random.default_rng(13)
        for lam, phi in zip(rng.uniform(0, 3, 100), rng.uniform(-10, 10, 100)):
            np.testing.assert_allclose(renner_teller_ground_state(lam, phi + 2 * math.pi).amplitudes,
                                       renner_teller_ground_state(lam, phi).amplitudes,
                                       rtol=0, atol=1e-12)

    def test_matches_oracle(self):
        rng = np.random.default_rng(17)
        for lam, phi in zip(rng.uniform(0.05, 3, 100), rng.uniform(0, 2 * math.pi, 100)):
            closed = renner_teller_ground_state(lam, phi).amplitudes
            oracle = jacobi_eigensystem(build_x_rotated_hamiltonian(lam, phi)).ground_vector()
            overlap = np.vdot(closed, oracle)
            aligned = closed * overlap / abs(overlap)
            np.testing.assert_allclose(aligned, oracle, rtol=0, atol=1e-8)

    def test_half_turn_against_oracle(self):
        state = renner_teller_ground_state(1.0, math.pi)
        half = math.pi / 8
        assert state.a == pytest.approx(-math.sin(half), abs=1e-15)
        assert state.d == pytest.approx(-math.cos(half), abs=1e-15)
        oracle = jacobi_eigensystem(build_x_rotated_hamiltonian(1.0, math.pi)).ground_vector()
        assert abs(np.vdot(state.amplitudes, oracle)) == pytest.approx(1.0, abs=1e-10)

    def test_negative_lambda_rejected(self):
        with pytest.raises(InvalidParameterError):
            renner_teller_ground_state(-1.0, 0.0)

    @pytest.mark.parametrize('lam, tolerance', [(0.01, 1e-5), (0.5, 1e-6), (3.0, 1e-6)])
    def test_loop_phase_vanishes(self, lam, tolerance):
        result = renner_teller_loop_phase(lam, 2000)
        assert result.phase == pytest.approx(0.0, abs=tolerance)
        assert result.segment_count == 2000

    def test_loop_validation(self):
        with pytest.raises(InvalidParameterError):
            renner_teller_loop_phase(0.0, 2000)
        with pytest.raises(InvalidParameterError):
            renner_teller_loop_phase(0.5, 50)

    def test_energies(self):
        assert renner_teller_energies(0.0) == (-1.0, -1.0)
        even, odd = renner_teller_energies(0.75)
        assert even == -1.25
        assert odd == -1.0
        eigenvalues = np.linalg.eigvalsh(build_x_rotated_hamiltonian(0.75, 0.4).entries)
        assert eigenvalues[0] == pytest.approx(even, abs=1e-13)
