import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import grid_of, mode
from opial_lab import funcspace as fs
from opial_lab.funcspace import GridFunction, SineSeries
from opial_lab.quadrature import integrate_smooth
from opial_lab.specfun import DomainError

coefficient_vectors = arrays(np.float64, st.integers(1, 10), elements=st.floats(-1.0, 1.0))


class TestEvaluate:
    def test_examples(self):
        assert fs.evaluate(SineSeries(1.0, [1.0]), 0.5) == pytest.approx(1.0, abs=1e-15)
        assert fs.evaluate(SineSeries(1.0, [1.0]), 0.0) == 0.0
        assert fs.evaluate(SineSeries(1.0, [0.0, 1.0]), 0.25) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("x", [-1e-12, 1.0 + 1e-12, math.nan])
    def test_outside_interval(self, x):
        with pytest.raises(DomainError):
            fs.evaluate(SineSeries(1.0, [1.0]), x)

    @settings(max_examples=50, deadline=None)
    @given(coefficient_vectors, st.floats(0.1, 10.0))
    def test_boundary_values_exactly_zero(self, coeffs, L):
        u = SineSeries(L, coeffs)
        assert fs.evaluate(u, 0.0) == 0.0
        assert fs.evaluate(u, L) == 0.0


class TestConstruction:
    @pytest.mark.parametrize("L", [0.0, -1.0, math.inf])
    def test_bad_length(self, L):
        with pytest.raises(DomainError):
            SineSeries(L, [1.0])

    def test_bad_coefficients(self):
        with pytest.raises(DomainError):
            SineSeries(1.0, [])
        with pytest.raises(DomainError):
            SineSeries(1.0, [1.0, math.nan])

    def test_grid_needs_three_nodes(self):
        with pytest.raises(DomainError):
            GridFunction(1.0, [0.0, 1.0])

    def test_values_are_frozen(self):
        u = SineSeries(1.0, [1.0, 2.0])
        with pytest.raises(ValueError):
            u.coefficients[0] = 5.0
        g = u.to_grid(8)
        with pytest.raises(ValueError):
            g.values[1] = 5.0


class TestParseval:
    def test_norm_examples(self):
        assert fs.norm_l2_sq(SineSeries(1.0, [1.0])) == pytest.approx(0.5)
        assert fs.norm_l2_sq(SineSeries(1.0, [0.0])) == 0.0
        assert fs.norm_l2_sq(SineSeries(2.0, [1.0, 1.0])) == pytest.approx(2.0)

    def test_energy_examples(self):
        assert fs.dirichlet_energy(SineSeries(1.0, [1.0])) == pytest.approx(math.pi**2 / 2)
        assert fs.dirichlet_energy(SineSeries(2.0, [1.0])) == pytest.approx(math.pi**2 / 4)
        assert fs.dirichlet_energy(SineSeries(1.0, [0.0, 1.0])) == pytest.approx(2 * math.pi**2)

    def test_quadrature_agrees_with_parseval(self):
        for seed in range(20):
            u = fs.sample_random(6, decay=0.5, seed=seed, length=1.7)
            quad = integrate_smooth(lambda x: u(x) ** 2, 0.0, u.length, 1e-13).value
            assert quad == pytest.approx(fs.norm_l2_sq(u), rel=1e-9)
            quad_e = integrate_smooth(lambda x: u.derivative(x) ** 2, 0.0, u.length, 1e-13).value
            assert quad_e == pytest.approx(fs.dirichlet_energy(u), rel=1e-9)


class TestAbsoluteFunctionals:
    def test_opial_examples(self):
        assert fs.opial_functional(SineSeries(1.0, [1.0])) == pytest.approx(1.0, rel=1e-12)
        assert fs.opial_functional(grid_of(lambda x: x, n=1000)) == pytest.approx(0.5, abs=1e-6)
        assert fs.opial_functional(SineSeries(1.0, [0.0])) == 0.0

    def test_lp1_examples(self):
        assert fs.lp1_functional(SineSeries(1.0, [1.0]), 1) == pytest.approx(0.5, rel=1e-12)
        assert fs.lp1_functional(SineSeries(1.0, [1.0]), 3) == pytest.approx(0.375, rel=1e-12)
        assert fs.lp1_functional(SineSeries(1.0, [0.0]), 3) == 0.0

    def test_lp1_rejects_small_exponent(self):
        with pytest.raises(DomainError):
            fs.lp1_functional(SineSeries(1.0, [1.0]), 0.5)

    def test_lp1_with_sign_changes_matches_adaptive_quadrature(self):
        u = SineSeries(1.0, [0.3, -1.0, 0.7, 0.2])
        ref = integrate_smooth(lambda x: np.abs(u(x)) ** 2.5, 0.0, 1.0, 1e-13).value
        assert fs.lp1_functional(u, 1.5) == pytest.approx(ref, rel=1e-9)

    def test_p_equal_one_is_the_l2_norm(self):
        for seed in range(5):
            u = fs.sample_random(5, seed=seed)
            assert fs.lp1_functional(u, 1.0) == pytest.approx(fs.norm_l2_sq(u), rel=1e-10)


class TestMean:
    def test_examples(self):
        assert abs(fs.mean(SineSeries(1.0, [0.0, 1.0]))) <= 1e-12
        assert fs.mean(SineSeries(1.0, [1.0])) == pytest.approx(2 / math.pi, rel=1e-12)
        assert fs.mean(grid_of(lambda x: 0.0 * x)) == 0.0

    def test_closed_form_weights(self):
        u = fs.sample_random(7, seed=3)
        expected = float(np.dot(fs.mean_weights(7), u.coefficients))
        assert fs.mean(u) == pytest.approx(expected, rel=1e-12)

    def test_projection_removes_mean(self):
        u = fs.project_mean_zero(fs.sample_random(9, seed=11))
        assert abs(fs.mean(u)) <= 1e-14 * fs.sup_norm(u)


class TestSampling:
    def test_single_mode_bounded(self):
        u = fs.sample_random(1, 0.0, seed=5)
        assert u.coefficients.size == 1 and abs(u.coefficients[0]) <= 1.0

    def test_deterministic(self):
        a = fs.sample_random(8, 1.0, seed=[4, 2])
        b = fs.sample_random(8, 1.0, seed=[4, 2])
        assert np.array_equal(a.coefficients, b.coefficients)
        c = fs.sample_random(8, 1.0, seed=[4, 3])
        assert not np.array_equal(a.coefficients, c.coefficients)

    def test_decay_bound(self):
        for seed in range(50):
            assert abs(fs.sample_random(8, 2.0, seed=seed).coefficients[7]) <= 1.0 / 64

    def test_invalid(self):
        with pytest.raises(DomainError):
            fs.sample_random(0)
        with pytest.raises(DomainError):
            fs.sample_random(3, decay=-1.0)


class TestGrid:
    def test_csv_round_trip(self):
        g = SineSeries(2.0, [1.0, 0.25]).to_grid(50)
        text = g.to_csv()
        assert text.splitlines()[0] == "x,u"
        back = GridFunction.from_csv(io.StringIO(text))
        assert back.length == g.length
        assert np.array_equal(back.values, g.values)

    def test_derivative_is_second_order_at_the_ends(self):
        g = grid_of(lambda x: x**2, n=10)
        assert np.allclose(g.derivative(), 2.0 * g.nodes, atol=1e-13)

    def test_functionals_converge_at_second_order(self):
        u = SineSeries(1.0, [1.0, -0.4, 0.2])
        exact_e = fs.dirichlet_energy(u)
        exact_o = fs.opial_functional(u)
        errors_e, errors_o = [], []
        for n in (100, 200, 400, 800):
            g = u.to_grid(n)
            errors_e.append(abs(fs.dirichlet_energy(g) - exact_e))
            errors_o.append(abs(fs.opial_functional(g) - exact_o))
        ns = np.array([100, 200, 400, 800])
        slope_e = -np.polyfit(np.log(ns), np.log(errors_e), 1)[0]
        assert slope_e > 1.9
        # |u u'| has kinks at sign changes, so single doublings wobble; the
        # fitted slope and an N^-2 envelope are the stable statements
        slope_o = -np.polyfit(np.log(ns), np.log(errors_o), 1)[0]
        assert slope_o > 1.7
        assert np.all(np.array(errors_o) * ns**2 <= 4.0 * errors_o[0] * ns[0] ** 2)
        l2 = [abs(fs.norm_l2_sq(u.to_grid(n)) - fs.norm_l2_sq(u)) for n in (100, 200, 400, 800)]
        assert all(e <= 10.0 / n**2 for e, n in zip(l2, (100, 200, 400, 800)))

    def test_sup_norm_finds_interior_peak(self):
        u = SineSeries(1.0, [1.0, 0.5])
        x = np.linspace(0, 1, 200001)
        assert fs.sup_norm(u) == pytest.approx(np.max(np.abs(u(x))), rel=1e-9)
