import numpy as np
import pytest

from ringglow import (DimensionError, Direction, Polarization, ResolutionError,
                      ResourceLimitError, build_hpi_state, build_single_ring,
                      build_stacked_rings, count_azimuthal_peaks, omega_f,
                      omega_f_bruteforce, prefactor, sample_grid,
                      three_atom_closed_form)
from ringglow import farfield

X = Polarization.x()
Y = Polarization.y()


def random_directions(rng, count):
    return [Direction(t, p) for t, p in
            zip(rng.uniform(0, np.pi, count), rng.uniform(0, 2 * np.pi, count))]


class TestPrefactor:
    def test_forward_is_one_for_x_pol(self):
        assert prefactor(Direction(0.0, 0.0), X) == pytest.approx(1.0)

    def test_along_dipole_is_zero(self):
        assert prefactor(Direction(np.pi / 2, 0.0), X) == pytest.approx(0.0, abs=1e-15)

    def test_generic_formula(self):
        th, ph = 0.7, 2.1
        expected = 1 - np.sin(th) ** 2 * np.cos(ph) ** 2
        assert prefactor(Direction(th, ph), X) == pytest.approx(expected, rel=1e-13)

    def test_unit_direction(self):
        assert np.linalg.norm(Direction(0.3, 4.0).unit) == pytest.approx(1.0, abs=1e-12)

    def test_bad_polarization(self):
        with pytest.raises(ValueError):
            Polarization(np.array([1.0, 1.0, 0.0]))


class TestOmegaF:
    def test_single_atom_is_dipole_pattern(self):
        # one atom, one excitation: unit-modulus single-term sum
        from ringglow import AtomArray
        arr = AtomArray("single", 1, 1, 0.2, 0.0, 0.0,
                        np.array([[0.2, 0.0, 0.0]]))
        state = build_hpi_state(arr, 1, 0)
        for d in (Direction(0.9, 1.3), Direction(0.0, 0.0), Direction(2.2, 5.0)):
            assert omega_f(state, arr, d, X) == pytest.approx(
                prefactor(d, X), rel=1e-13, abs=1e-15)

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(42)
        arr = build_single_ring(6, 0.2)
        state = build_hpi_state(arr, 2, 2)
        for d in random_directions(rng, 25):
            a = omega_f(state, arr, d, X)
            b = omega_f_bruteforce(state, arr, d, X)
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12)

    def test_bruteforce_generalized_label(self):
        from ringglow import build_generalized_state
        rng = np.random.default_rng(3)
        arr = build_stacked_rings(4, 2, 0.2, 0.35)
        state = build_generalized_state(arr, 2, 5)
        for d in random_directions(rng, 10):
            a = omega_f(state, arr, d, X)
            b = omega_f_bruteforce(state, arr, d, X)
            assert a == pytest.approx(b, rel=1e-11, abs=1e-11)

    def test_mismatched_geometry(self):
        arr = build_single_ring(6, 0.2)
        state = build_hpi_state(build_single_ring(4, 0.2), 2, 1)
        with pytest.raises(DimensionError):
            omega_f(state, arr, Direction(1, 1), X)

    def test_bruteforce_cap(self):
        arr = build_single_ring(50, 0.2)
        state = build_hpi_state(arr, 2, 1)
        with pytest.raises(ResourceLimitError):
            omega_f_bruteforce(state, arr, Direction(1, 1), X)

    def test_forward_lobe_l2_n4(self):
        arr = build_single_ring(4, 0.2)
        st2 = build_hpi_state(arr, 2, 2)
        fwd = omega_f_bruteforce(st2, arr, Direction(0.0, 0.0), X)
        side = omega_f_bruteforce(st2, arr, Direction(np.pi / 2, np.pi / 2), X)
        assert fwd > side

    def test_side_scattering_l1_n4(self):
        arr = build_single_ring(4, 0.2)
        st1 = build_hpi_state(arr, 2, 1)
        fwd = omega_f_bruteforce(st1, arr, Direction(0.0, 0.0), X)
        side = omega_f_bruteforce(st1, arr, Direction(np.pi / 2, np.pi / 2), X)
        assert side > fwd


class TestThreeAtomClosedForm:
    def test_small_ring_l0(self):
        d = Direction(0.8, 2.5)
        expected = (1 - np.sin(0.8) ** 2 * np.cos(2.5) ** 2) * 9
        assert three_atom_closed_form(d, 0, 1e-9) == pytest.approx(expected, rel=1e-9)

    def test_small_ring_l1_cancels(self):
        d = Direction(0.8, 2.5)
        assert three_atom_closed_form(d, 1, 1e-9) == pytest.approx(0.0, abs=1e-7)

    def test_matches_general_path(self):
        r_bar = 0.4 * np.pi
        arr = build_single_ring(3, r_bar / (2 * np.pi))
        state = build_hpi_state(arr, 2, 1)
        d = Direction(np.pi / 3, 1.2)
        assert omega_f(state, arr, d, X) == pytest.approx(
            three_atom_closed_form(d, 1, r_bar), rel=1e-12)


class TestSymmetries:
    def test_mode_symmetry_even_n(self):
        rng = np.random.default_rng(5)
        for n in (4, 6, 12):
            arr = build_single_ring(n, 0.2)
            for l in range(1, n // 2 + 1):
                sa = build_hpi_state(arr, 2, l)
                sb = build_hpi_state(arr, 2, n - l)
                for d in random_directions(rng, 10):
                    assert omega_f(sa, arr, d, X) == pytest.approx(
                        omega_f(sb, arr, d, X), rel=1e-11, abs=1e-11)

    def test_m_equals_n_minus_one(self):
        rng = np.random.default_rng(6)
        for n in (3, 4, 5):
            arr = build_single_ring(n, 0.2)
            for l in range(n):
                hi = build_hpi_state(arr, n - 1, l)
                lo = build_hpi_state(arr, 1, l)
                for d in random_directions(rng, 10):
                    assert omega_f(hi, arr, d, X) == pytest.approx(
                        omega_f(lo, arr, d, X), rel=1e-11, abs=1e-11)

    def test_c4_rotation(self):
        rng = np.random.default_rng(7)
        arr = build_single_ring(8, 0.2)
        state = build_hpi_state(arr, 2, 3)
        for d in random_directions(rng, 20):
            a = omega_f(state, arr, Direction(d.theta, d.phi + np.pi / 2), X)
            b = omega_f(state, arr, d, Y)
            assert a == pytest.approx(b, rel=1e-11, abs=1e-11)

    def test_l_sign_symmetry_small_ring(self):
        rng = np.random.default_rng(8)
        arr = build_single_ring(5, 0.2).scaled(1e-6)
        for l in (1, 2):
            sa = build_hpi_state(arr, 2, l)
            sb = build_hpi_state(arr, 2, -l)
            for d in random_directions(rng, 10):
                assert omega_f(sa, arr, d, X) == pytest.approx(
                    omega_f(sb, arr, d, X), rel=1e-11, abs=1e-11)

    def test_zero_along_dipole(self):
        arr = build_single_ring(6, 0.2)
        state = build_hpi_state(arr, 2, 1)
        assert omega_f(state, arr, Direction(np.pi / 2, 0.0), X) == \
            pytest.approx(0.0, abs=1e-12)


class TestSampleGrid:
    def test_big_grid_nonnegative(self):
        arr = build_single_ring(12, 0.2)
        state = build_hpi_state(arr, 2, 3)
        grid = sample_grid(state, arr, X, 181, 361)
        assert grid.values.shape == (181, 361)
        assert np.all(grid.values >= 0)

    def test_matches_pointwise_omega_f(self):
        arr = build_stacked_rings(4, 2, 0.2, 0.35)
        state = build_hpi_state(arr, 2, 1)
        grid = sample_grid(state, arr, X, 7, 9)
        for i in (0, 3, 6):
            for j in (0, 4, 8):
                d = Direction(grid.thetas[i], grid.phis[j])
                assert grid.values[i, j] == pytest.approx(
                    omega_f(state, arr, d, X), rel=1e-12, abs=1e-12)

    def test_threads_same_result(self):
        arr = build_single_ring(8, 0.2)
        state = build_hpi_state(arr, 2, 2)
        a = sample_grid(state, arr, X, 32, 33, threads=1)
        b = sample_grid(state, arr, X, 32, 33, threads=4)
        np.testing.assert_array_equal(a.values, b.values)

    def test_symmetric_state_smooth_for_tiny_ring(self):
        arr = build_single_ring(8, 0.2).scaled(1e-6)
        state = build_hpi_state(arr, 2, 0)
        grid = sample_grid(state, arr, Polarization(np.array([0, 0, 1.0]), "z"),
                           33, 64)
        # z-pol removes the azimuthal prefactor variation; tiny ring makes
        # the structure factor constant, so every row is flat
        spread = grid.values.max(axis=1) - grid.values.min(axis=1)
        assert np.all(spread <= 1e-9 * max(1, grid.values.max()))

    def test_grid_too_small(self):
        arr = build_single_ring(4, 0.2)
        state = build_hpi_state(arr, 2, 1)
        with pytest.raises(ResolutionError):
            sample_grid(state, arr, X, 1, 10)

    def test_work_cap(self):
        arr = build_single_ring(30, 0.2)
        state = build_hpi_state(arr, 3, 1)
        with pytest.raises(ResourceLimitError):
            sample_grid(state, arr, X, 1000, 2000)


class TestPeakCounting:
    def test_n12_l3_has_12_peaks(self):
        arr = build_single_ring(12, 0.2)
        state = build_hpi_state(arr, 2, 3)
        grid = sample_grid(state, arr, X, 91, 721)
        assert count_azimuthal_peaks(grid, np.pi / 2) == 12

    def test_n4_l1_has_4_peaks(self):
        arr = build_single_ring(4, 0.2)
        state = build_hpi_state(arr, 2, 1)
        grid = sample_grid(state, arr, X, 91, 721)
        assert count_azimuthal_peaks(grid, np.pi / 2) == 4

    def test_flat_row_has_no_peaks(self):
        arr = build_single_ring(4, 0.2).scaled(1e-8)
        state = build_hpi_state(arr, 2, 0)
        grid = sample_grid(state, arr, Polarization(np.array([0, 0, 1.0]), "z"),
                           9, 64)
        assert count_azimuthal_peaks(grid, np.pi / 2) == 0

    def test_under_resolved(self):
        arr = build_single_ring(4, 0.2)
        state = build_hpi_state(arr, 2, 1)
        grid = sample_grid(state, arr, X, 9, 4)
        with pytest.raises(ResolutionError):
            count_azimuthal_peaks(grid, np.pi / 2)
        with pytest.raises(ResolutionError):
            count_azimuthal_peaks(sample_grid(state, arr, X, 9, 64), 7.0)


class TestExport:
    def test_csv_schema(self):
        arr = build_single_ring(4, 0.2)
        state = build_hpi_state(arr, 2, 1)
        grid = sample_grid(state, arr, X, 3, 4)
        lines = farfield.grid_to_csv(grid).strip().split("\n")
        assert lines[0] == "theta,phi,omega_f"
        assert len(lines) == 1 + 3 * 4
        th, ph, om = map(float, lines[1].split(","))
        assert (th, ph) == (0.0, 0.0)
        assert om == pytest.approx(grid.values[0, 0], rel=1e-16)

    def test_json_has_metadata(self):
        import json
        arr = build_single_ring(4, 0.2)
        state = build_hpi_state(arr, 2, 1)
        grid = sample_grid(state, arr, X, 3, 4)
        d = json.loads(farfield.grid_to_json(grid))
        assert d["metadata"]["state"] == {"oam": 1}
        assert d["metadata"]["polarization"] == "x"
        assert np.asarray(d["values"]).shape == (3, 4)
