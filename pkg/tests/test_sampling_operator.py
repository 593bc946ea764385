"""Tests for the coset interpolation operator and sample handling."""

import numpy as np
import pytest

from msamp import (
    ConstraintError,
    MultiscaleSignalSpec,
    SampleSet,
    SincAtom,
    apply_coset_operator,
    build_grid,
    coset_parseval_check,
    decompose_frequency,
    alias_branch,
    evaluate,
    evaluate_coefficient,
    kernel_phi_s,
    random_signal,
    sample_signal,
    samples_from_csv,
    samples_to_csv,
)

TWO_OVER_PI = 0.63661977236758134308


def spec_and_grid(seed=7, J=64):
    spec = random_signal(seed=seed, N=1.0, M=1, epsilon=0.1, atoms_per_band=2)
    grid = build_grid(0.22, 0.03, 2, J)
    return spec, grid


class TestKernel:
    def test_unit_at_zero(self):
        assert kernel_phi_s(0.0, 0.35) == 1.0

    def test_zero_at_macro_multiples(self):
        dX = 0.35
        for n in (1, -1, 3, -12):
            assert kernel_phi_s(n * dX, dX) == 0.0

    def test_half_spacing(self):
        dX = 0.4
        assert abs(kernel_phi_s(dX / 2, dX) - TWO_OVER_PI) < 1e-15

    def test_requires_positive_spacing(self):
        with pytest.raises(ConstraintError):
            kernel_phi_s(0.1, 0.0)


class TestSampleSignal:
    def test_values_match_vectorized_evaluate(self):
        spec, grid = spec_and_grid()
        samples = sample_signal(spec, grid)
        for k in range(grid.P + 1):
            expected = evaluate(spec, grid.coset_points(k))
            assert np.array_equal(samples.coset_row(k), expected)

    def test_far_field_decay(self):
        # lone unit atom at the origin: |f(x)| <= 1/(pi*2N*|x|)
        spec = MultiscaleSignalSpec(
            epsilon=0.1, N=1.0, M=0, bands={0: [SincAtom(0, 1.0)]}
        )
        grid = build_grid(0.5, 0.0, 0, 256)
        samples = sample_signal(spec, grid)
        for j in (64, 128, 256, -100, -256):
            x = grid.point(0, j)
            assert abs(samples.value(0, j)) <= 1 / (np.pi * 2 * abs(x)) + 1e-15

    def test_nyquist_sampling_of_sinc_is_delta(self):
        spec = MultiscaleSignalSpec(
            epsilon=0.1, N=1.0, M=0, bands={0: [SincAtom(0, 1.0)]}
        )
        grid = build_grid(0.5, 0.0, 0, 32)  # delta_X = 1/(2N)
        samples = sample_signal(spec, grid)
        expected = np.zeros(65, dtype=complex)
        expected[32] = 1.0
        assert np.array_equal(samples.values[0], expected)

    def test_invalid_grid_rejected(self):
        spec, _ = spec_and_grid()
        bad = build_grid(0.6, 0.03, 2, 8)
        with pytest.raises(ConstraintError, match="delta_X <= 1/"):
            sample_signal(spec, bad)

    def test_check_can_be_disabled(self):
        spec, _ = spec_and_grid()
        bad = build_grid(0.01, 0.0, 0, 8)  # full-rate uniform, P != 2M
        samples = sample_signal(spec, bad, check=False)
        assert samples.values.shape == (1, 17)


class TestInterpolationIdentity:
    def test_reproduces_every_stored_sample(self):
        spec, grid = spec_and_grid(seed=21, J=48)
        samples = sample_signal(spec, grid)
        worst = 0.0
        for k in range(grid.P + 1):
            xs = grid.coset_points(k)
            out = apply_coset_operator(samples, k, xs)
            stored = samples.coset_row(k)
            scale = np.abs(stored) + 1e-300
            worst = max(worst, float(np.max(np.abs(out - stored) / scale)))
        assert worst <= 1e-13

    def test_single_nonzero_sample_gives_kernel(self, rng):
        _, grid = spec_and_grid(J=16)
        values = np.zeros((3, 33), dtype=complex)
        values[1, 16] = 1.0  # (k=1, j=0)
        samples = SampleSet(grid, values)
        xs = rng.uniform(-4, 4, size=20)
        out = apply_coset_operator(samples, 1, xs)
        expected = kernel_phi_s(xs - grid.delta_x, grid.delta_X)
        np.testing.assert_allclose(out, expected, atol=1e-15)

    def test_coset_out_of_range(self):
        spec, grid = spec_and_grid(J=8)
        samples = sample_signal(spec, grid)
        with pytest.raises(ConstraintError):
            apply_coset_operator(samples, 3, 0.0)

    def test_classical_interpolation_matches_signal(self, rng, calibration):
        # M = 0 at the critical spacing: S_0 is plain cardinal interpolation
        spec = random_signal(seed=3, N=1.0, M=0, epsilon=0.05, atoms_per_band=2)
        grid = build_grid(0.5, 0.0, 0, 256)
        samples = sample_signal(spec, grid)
        xs = rng.uniform(-grid.J * grid.delta_X / 2, grid.J * grid.delta_X / 2, 25)
        out = apply_coset_operator(samples, 0, xs)
        truth = evaluate(spec, xs)
        scale = np.max(np.abs(truth))
        assert np.max(np.abs(out - truth)) <= calibration.tau(256) * scale


class TestAliasingIdentity:
    def test_lower_branch_band_folds_with_phase(self, rng, calibration):
        # single occupied band, alias offset in [0, 1/(2dX) - N]: the
        # interpolant is the envelope times the folded carrier
        eps, N, dX, dx, J = 0.1, 1.0, 0.22, 0.03, 256
        spec = MultiscaleSignalSpec(
            epsilon=eps, N=N, M=1,
            bands={1: [SincAtom(0, 0.8 + 0.1j), SincAtom(1, -0.3 + 0.6j)]},
        )
        grid = build_grid(dX, dx, 2, J)
        samples = sample_signal(spec, grid)
        split = decompose_frequency(1, eps, dX)
        assert split.alpha <= 1 / (2 * dX)  # lower branch configuration
        xs = rng.uniform(-J * dX / 2, J * dX / 2, 30)
        for k in range(3):
            out = apply_coset_operator(samples, k, xs)
            cm = evaluate_coefficient(spec, 1, xs)
            pred = cm * np.exp(
                2j * np.pi * (split.alpha * xs + (split.L / dX) * k * dx)
            )
            scale = np.max(np.abs(cm))
            assert np.max(np.abs(out - pred)) <= calibration.tau(J) * scale

    def test_upper_branch_band_needs_centered_split(self, rng, calibration):
        # alpha > 1/(2dX): the surviving alias is the centered remainder
        eps, N, dX, dx, J = 0.1, 1.0, 0.22, 0.03, 256
        spec = MultiscaleSignalSpec(
            epsilon=eps, N=N, M=1, bands={-1: [SincAtom(0, 1.0 - 0.4j)]}
        )
        grid = build_grid(dX, dx, 2, J)
        samples = sample_signal(spec, grid)
        split = decompose_frequency(-1, eps, dX)
        assert split.alpha > 1 / (2 * dX)  # upper branch configuration
        L_eff, beta = alias_branch(split, dX)
        assert L_eff == split.L + 1 and beta < 0
        # points near the envelope center, where a wrong branch is O(1) off
        xs = rng.uniform(-2.0, 2.0, 30)
        k = 2
        out = apply_coset_operator(samples, k, xs)
        cm = evaluate_coefficient(spec, -1, xs)
        scale = np.max(np.abs(cm))
        pred_eff = cm * np.exp(2j * np.pi * (beta * xs + (L_eff / dX) * k * dx))
        pred_floor = cm * np.exp(
            2j * np.pi * (split.alpha * xs + (split.L / dX) * k * dx)
        )
        assert np.max(np.abs(out - pred_eff)) <= calibration.tau(J) * scale
        assert np.max(np.abs(out - pred_floor)) > 0.1 * scale

    def test_operator_linear_in_samples(self, rng):
        spec, grid = spec_and_grid(J=32)
        s1 = sample_signal(spec, grid)
        s2 = SampleSet(grid, s1.values[::-1].copy())  # reshuffled rows
        s_sum = SampleSet(grid, s1.values + s2.values)
        xs = rng.uniform(-3, 3, 12)
        for k in range(3):
            a = apply_coset_operator(s1, k, xs)
            b = apply_coset_operator(s2, k, xs)
            c = apply_coset_operator(s_sum, k, xs)
            np.testing.assert_allclose(c, a + b, atol=1e-13)


class TestParseval:
    def test_single_sample(self):
        _, grid = spec_and_grid(J=16)
        values = np.zeros((3, 33), dtype=complex)
        values[0, 16] = 2.0 - 1.0j
        samples = SampleSet(grid, values)
        lhs, rhs = coset_parseval_check(samples, 0)
        assert rhs == pytest.approx(grid.delta_X * 5.0, rel=1e-14)
        assert abs(lhs / rhs - 1) <= 1e-2

    def test_random_signal_row(self):
        spec, grid = spec_and_grid(seed=5, J=64)
        samples = sample_signal(spec, grid)
        lhs, rhs = coset_parseval_check(samples, 1)
        assert abs(lhs / rhs - 1) <= 1e-2

    def test_zero_row(self):
        _, grid = spec_and_grid(J=8)
        values = np.zeros((3, 17), dtype=complex)
        values[2, 3] = 1.0  # keep another coset nonzero
        samples = SampleSet(grid, values)
        lhs, rhs = coset_parseval_check(samples, 0)
        assert (lhs, rhs) == (0.0, 0.0)


class TestSampleCsv:
    def test_round_trip_exact(self, tmp_path):
        spec, grid = spec_and_grid(seed=9, J=12)
        samples = sample_signal(spec, grid)
        path = tmp_path / "samples.csv"
        samples_to_csv(samples, path)
        back = samples_from_csv(path)
        assert back.grid == grid
        assert np.array_equal(back.values, samples.values)

    def test_header_required(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ConstraintError, match="header"):
            samples_from_csv(path)

    def test_incomplete_grid_rejected(self, tmp_path):
        spec, grid = spec_and_grid(seed=9, J=4)
        samples = sample_signal(spec, grid)
        path = tmp_path / "samples.csv"
        samples_to_csv(samples, path)
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-2]) + "\n")
        with pytest.raises(ConstraintError, match="complete"):
            samples_from_csv(path)
