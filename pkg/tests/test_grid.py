import math

import numpy as np
import pytest

from frft_uncertainty.errors import GridDataError
from frft_uncertainty.grid import (
    Axis,
    GridFunction,
    gradient,
    grid_from_dict,
    grid_to_dict,
    integrate,
    l2_norm_sq,
    load_grid,
    phase_density,
    save_grid,
    tail_mass,
)


def line(f, axis):
    return GridFunction.from_callable(f, (axis,))


class TestAxis:
    def test_coords(self):
        a = Axis(1.0, 0.5, 4)
        np.testing.assert_array_equal(a.coords, [1.0, 1.5, 2.0, 2.5])
        assert a.stop == 2.5

    @pytest.mark.parametrize("start,step,count", [(0, 0, 3), (0, -1, 3), (0, 1, 1), (0, 1, 2.5), (math.nan, 1, 3)])
    def test_rejects_bad_fields(self, start, step, count):
        with pytest.raises(ValueError):
            Axis(start, step, count)

    def test_symmetric_is_midpoint_rule(self):
        a = Axis.symmetric(8.0, 256)
        assert a.step == 1.0 / 16.0
        assert a.coords[0] == -8.0 + 1.0 / 32.0
        assert a.is_symmetric()
        assert a.is_self_dual()
        assert not a.undersampled()

    def test_dual_of_self_dual_axis_is_itself(self):
        a = Axis.symmetric(8.0, 256)
        assert a.dual() == a

    def test_undersampled_detection(self):
        assert Axis.symmetric(8.0, 128).undersampled()
        assert not Axis.symmetric(8.0, 1024).undersampled()
        assert not Axis.symmetric(8.0, 1024).is_self_dual()

    def test_asymmetric(self):
        assert not Axis(0.0, 1.0, 4).is_symmetric()


class TestGridFunction:
    def test_shape_mismatch(self):
        with pytest.raises(GridDataError):
            GridFunction((Axis(0, 1, 3),), np.zeros(4))

    @pytest.mark.parametrize("bad", [math.nan, math.inf])
    def test_non_finite_rejected(self, bad):
        with pytest.raises(GridDataError):
            GridFunction((Axis(0, 1, 3),), np.array([0.0, bad, 1.0]))

    def test_dimension_limit(self):
        a = Axis(0, 1, 2)
        GridFunction((a,) * 4, np.zeros((2,) * 4))
        with pytest.raises(ValueError):
            GridFunction((a,) * 5, np.zeros((2,) * 5))

    def test_values_are_read_only_copy(self):
        src = np.zeros(3)
        g = GridFunction((Axis(0, 1, 3),), src)
        src[0] = 5.0
        assert g.values[0] == 0.0
        with pytest.raises(ValueError):
            g.values[0] = 1.0

    def test_coord_broadcast_shape(self):
        g = GridFunction((Axis(0, 1, 3), Axis(0, 1, 4)), np.zeros((3, 4)))
        assert g.coord(0).shape == (3, 1)
        assert g.coord(1).shape == (1, 4)
        with pytest.raises(ValueError):
            g.coord(2)


class TestIntegrate:
    def test_constant_on_unit_interval(self):
        g = line(lambda x: np.ones_like(x), Axis(0.005, 0.01, 100))
        assert integrate(g) == pytest.approx(1.0, abs=1e-12)

    def test_gaussian_1d(self):
        g = line(lambda x: np.exp(-math.pi * x * x), Axis.symmetric(8.0, 2048))
        assert abs(integrate(g) - 1.0) <= 1e-9

    def test_gaussian_2d(self):
        a = Axis.symmetric(8.0, 512)
        g = GridFunction.from_callable(lambda x, y: np.exp(-math.pi * (x * x + y * y)), (a, a))
        assert abs(integrate(g) - 1.0) <= 1e-8

    def test_linearity(self):
        a = Axis.symmetric(4.0, 64)
        rng = np.random.default_rng(0)
        u = rng.normal(size=64) + 1j * rng.normal(size=64)
        v = rng.normal(size=64)
        lhs = integrate(GridFunction((a,), 2.5 * u - 3.0 * v))
        rhs = 2.5 * integrate(GridFunction((a,), u)) - 3.0 * integrate(GridFunction((a,), v))
        assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))

    def test_return_types(self):
        a = Axis(0, 1, 3)
        assert isinstance(integrate(GridFunction((a,), np.ones(3))), float)
        assert isinstance(integrate(GridFunction((a,), np.ones(3) * 1j)), complex)


class TestNorm:
    def test_unit_chirp(self, case_a_grid):
        assert abs(l2_norm_sq(case_a_grid) - 1.0) <= 1e-6

    def test_zero(self):
        assert l2_norm_sq(GridFunction((Axis(0, 1, 3),), np.zeros(3))) == 0.0

    def test_homogeneity(self, case_a_grid):
        c = 1.5 - 2.0j
        scaled = case_a_grid.with_values(c * case_a_grid.values)
        assert l2_norm_sq(scaled) == pytest.approx(abs(c) ** 2 * l2_norm_sq(case_a_grid), rel=1e-14)


class TestGradient:
    def test_linear_is_exact(self):
        g = gradient(line(lambda x: x, Axis.symmetric(1.0, 20)), 0)
        np.testing.assert_allclose(g.values, 1.0, rtol=0, atol=1e-12)

    def test_quadratic(self):
        a = Axis.symmetric(1.0, 20)
        g = gradient(line(lambda x: x * x, a), 0)
        np.testing.assert_allclose(g.values[1:-1], 2 * a.coords[1:-1], atol=1e-12)
        assert np.max(np.abs(g.values - 2 * a.coords)) <= 10 * a.step**2

    @pytest.mark.parametrize("order", [2, 4, 6, 8])
    def test_plane_wave_converges_at_order(self, order):
        c = 0.7
        errs = []
        for n in (64, 128):
            a = Axis.symmetric(2.0, n)
            f = line(lambda x: np.exp(2j * math.pi * c * x), a)
            est = gradient(f, 0, order).values / (2j * math.pi * f.values)
            errs.append(np.max(np.abs(est - c)))
        assert errs[0] / errs[1] > 0.7 * 2**order

    def test_constant_has_zero_gradient(self):
        a = Axis.symmetric(1.0, 16)
        g = GridFunction((a, a), np.full((16, 16), 3.0 + 1j))
        for k in (0, 1):
            for order in (2, 8):
                assert np.max(np.abs(gradient(g, k, order).values)) <= 1e-12

    def test_bad_dimension(self):
        with pytest.raises(ValueError):
            gradient(line(lambda x: x, Axis(0, 1, 5)), 1)

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            gradient(GridFunction((Axis(0, 1, 2),), np.zeros(2)), 0)
        with pytest.raises(ValueError):
            gradient(line(lambda x: x, Axis(0, 1, 5)), 0, order=8)

    def test_bad_order(self):
        with pytest.raises(ValueError):
            gradient(line(lambda x: x, Axis(0, 1, 20)), 0, order=3)


class TestPhaseDensity:
    def test_real_function_is_zero(self, gaussian_grid):
        assert np.max(np.abs(phase_density(gaussian_grid, 0).values)) == 0.0

    def test_modulated_gaussian(self):
        b = 0.8
        a = Axis.symmetric(8.0, 1024)
        f = line(lambda x: np.exp(-math.pi * x * x + 2j * math.pi * b * x), a)
        expected = b * np.exp(-2 * math.pi * a.coords**2)
        assert np.max(np.abs(phase_density(f, 0).values - expected)) <= 20 * a.step**2

    def test_chirp_oracle(self, case_a, case_a_grid):
        x1 = case_a_grid.coord(0)
        expected = case_a_grid.density() * ((x1 - case_a.x0[0]) / case_a.eps1 + case_a.w0[0])
        got = phase_density(case_a_grid, 0, order=8).values
        assert np.max(np.abs(got - expected)) <= 1e-5

    def test_conjugate_flips_sign(self, case_a_grid):
        conj = case_a_grid.with_values(np.conj(case_a_grid.values))
        for k in (0, 1):
            np.testing.assert_allclose(
                phase_density(conj, k).values, -phase_density(case_a_grid, k).values, atol=1e-15
            )

    def test_zero_samples_give_zero(self):
        a = Axis.symmetric(1.0, 16)
        v = np.exp(2j * math.pi * a.coords)
        v[5] = 0.0
        pd = phase_density(GridFunction((a,), v), 0)
        assert pd.values[5] == 0.0


class TestTailMass:
    def test_compact_gaussian_is_tiny(self, gaussian_grid):
        assert tail_mass(gaussian_grid) < 1e-30

    def test_flat_function(self):
        a = Axis(0, 1, 100)
        assert tail_mass(GridFunction((a,), np.ones(100))) == pytest.approx(0.1)

    def test_zero(self):
        assert tail_mass(GridFunction((Axis(0, 1, 10),), np.zeros(10))) == 0.0


class TestIO:
    @pytest.mark.parametrize("suffix", [".json", ".bin"])
    def test_round_trip(self, tmp_path, suffix):
        rng = np.random.default_rng(1)
        axes = (Axis(-1.0, 0.25, 5), Axis(0.5, 0.1, 3))
        g = GridFunction(axes, rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3)))
        path = tmp_path / f"g{suffix}"
        save_grid(g, path)
        h = load_grid(path)
        assert h.axes == g.axes
        np.testing.assert_array_equal(h.values, g.values)

    def test_binary_layout(self, tmp_path):
        g = GridFunction((Axis(0.0, 1.0, 2),), np.array([1 + 2j, 3 - 4j]))
        path = tmp_path / "g.grid"
        save_grid(g, path)
        raw = path.read_bytes()
        assert raw[:4] == b"GRDF"
        assert len(raw) == 4 + 8 + 24 + 2 * 16
        np.testing.assert_array_equal(np.frombuffer(raw[-32:], dtype="<c16"), g.values)

    def test_row_major_json(self):
        g = GridFunction((Axis(0, 1, 2), Axis(0, 1, 3)), np.arange(6.0).reshape(2, 3))
        d = grid_to_dict(g)
        assert d["order"] == "row-major"
        assert d["values_re"] == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]
        assert grid_from_dict(d).values[1, 0] == 3.0

    @pytest.mark.parametrize(
        "doc",
        [
            {"axes": [{"start": 0, "step": 1, "count": 2}], "values_re": [1.0]},
            {"axes": [{"start": 0, "step": 1}], "values_re": [1.0, 2.0]},
            {"axes": [{"start": 0, "step": 1, "count": 2}], "values_re": [1.0, 2.0], "order": "col-major"},
        ],
    )
    def test_malformed_json(self, doc):
        with pytest.raises(GridDataError):
            grid_from_dict(doc)

    def test_garbage_file(self, tmp_path):
        p = tmp_path / "junk"
        p.write_bytes(b"\x00\x01not a grid")
        with pytest.raises(GridDataError):
            load_grid(p)

    def test_truncated_binary(self, tmp_path):
        p = tmp_path / "t.bin"
        p.write_bytes(b"GRDF\x01\x00")
        with pytest.raises(GridDataError):
            load_grid(p)
