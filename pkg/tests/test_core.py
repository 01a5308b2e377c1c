import math

import numpy as np
import pytest

import ris_secrecy as rs
from helpers import TABLE_P, crandn, unit_channels


class TestPhaseVector:
    def test_unit_builders(self):
        ones = rs.PhaseVector.ones(5)
        np.testing.assert_array_equal(ones.theta, np.ones(5, dtype=complex))
        rnd = rs.PhaseVector.random(64, np.random.default_rng(0))
        np.testing.assert_allclose(np.abs(rnd.theta), 1.0, atol=1e-14)

    def test_rejects_off_circle_entries(self):
        with pytest.raises(ValueError):
            rs.PhaseVector(np.array([1.0, 0.5 + 0.5j]))

    def test_empty_is_fine(self):
        assert len(rs.PhaseVector.ones(0)) == 0


class TestBeamformer:
    def test_rejects_over_budget(self):
        with pytest.raises(ValueError):
            rs.Beamformer(np.array([2.0, 0.0], dtype=complex), 1.0)

    def test_boundary_power_accepted(self):
        w = rs.Beamformer(np.array([1.0, 1.0], dtype=complex), 2.0)
        assert np.vdot(w.w, w.w).real == pytest.approx(2.0)


class TestEffectiveChannels:
    def test_surface_free_reduces_to_direct(self):
        rng = np.random.default_rng(1)
        nc = unit_channels(rng, 4, 0)
        pair = rs.effective_channels(nc, rs.PhaseVector.ones(0))
        np.testing.assert_array_equal(pair.z_b, nc.hat_h_ab)
        np.testing.assert_array_equal(pair.z_e, nc.hat_h_ae)

    def test_matches_diagonal_matrix_form(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            nc = unit_channels(rng, 3, 6)
            theta = rs.PhaseVector.random(6, rng)
            pair = rs.effective_channels(nc, theta)
            z_b_ref = nc.hat_h_ib @ np.diag(theta.theta) @ nc.H_ai + nc.hat_h_ab
            z_e_ref = nc.hat_h_ie @ np.diag(theta.theta) @ nc.H_ai + nc.hat_h_ae
            np.testing.assert_allclose(pair.z_b, z_b_ref, rtol=1e-13)
            np.testing.assert_allclose(pair.z_e, z_e_ref, rtol=1e-13)

    def test_size_mismatch_raises(self):
        rng = np.random.default_rng(3)
        nc = unit_channels(rng, 3, 6)
        with pytest.raises(ValueError):
            rs.effective_channels(nc, rs.PhaseVector.ones(5))


class TestObjective:
    def test_arithmetic_example(self):
        # |z_b w| = sqrt(3), |z_e w| = 1: ratio 2, one secret bit
        pair = rs.EffectivePair(
            np.array([math.sqrt(3.0)], dtype=complex), np.array([1.0], dtype=complex)
        )
        w = rs.Beamformer(np.array([1.0], dtype=complex), 1.0)
        assert rs.objective_f(pair, w) == pytest.approx(2.0, rel=1e-12)
        assert rs.secrecy_rate(pair, w) == pytest.approx(1.0, rel=1e-12)

    def test_rate_is_log_of_objective(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            n = int(rng.integers(1, 6))
            pair = rs.EffectivePair(crandn(rng, n), crandn(rng, n))
            w_dir = crandn(rng, n)
            w_dir *= math.sqrt(TABLE_P) / np.linalg.norm(w_dir)
            w = rs.Beamformer(w_dir, TABLE_P)
            f = rs.objective_f(pair, w)
            assert f > 0
            assert rs.secrecy_rate(pair, w) == pytest.approx(math.log2(f), abs=1e-12)

    def test_invariant_under_common_phase(self):
        rng = np.random.default_rng(5)
        pair = rs.EffectivePair(crandn(rng, 4), crandn(rng, 4))
        w_dir = crandn(rng, 4)
        w_dir *= math.sqrt(2.0) / np.linalg.norm(w_dir)
        f0 = rs.objective_f(pair, rs.Beamformer(w_dir, 2.0))
        for psi in (0.3, 1.7, 4.4):
            rotated = rs.Beamformer(np.exp(1j * psi) * w_dir, 2.0)
            assert rs.objective_f(pair, rotated) == pytest.approx(f0, rel=1e-12)

    def test_rate_negative_when_eavesdropper_stronger(self):
        pair = rs.EffectivePair(
            np.array([0.1], dtype=complex), np.array([5.0], dtype=complex)
        )
        w = rs.Beamformer(np.array([1.0], dtype=complex), 1.0)
        assert rs.secrecy_rate(pair, w) < 0.0

    def test_equal_magnitudes_give_unit_ratio(self):
        rng = np.random.default_rng(6)
        for psi in (0.0, 0.9, 2.8):
            z_b = crandn(rng, 3)
            pair = rs.EffectivePair(z_b, np.exp(1j * psi) * z_b)
            w_dir = crandn(rng, 3)
            w_dir *= math.sqrt(TABLE_P) / np.linalg.norm(w_dir)
            w = rs.Beamformer(w_dir, TABLE_P)
            assert rs.objective_f(pair, w) == pytest.approx(1.0, rel=1e-12)
