import json
import math

import numpy as np
import pytest

from opial_lab import emdenfowler as ef
from opial_lab.quadrature import i0
from opial_lab.specfun import DomainError

PI = math.pi
# 8 * I0(3)^2 to 18 digits (mpmath)
MU_A_3 = 13.7503716360407457
A_3 = math.sqrt(MU_A_3)
E_3 = 63.0242400430780  # energy of the p = 3, mu = 1, L = 1 ground state (mpmath quadrature)


class TestScalingRelation:
    def test_linear_case(self):
        assert ef.mu_amplitude_product(1, 1) == pytest.approx(PI**2, rel=1e-15)
        for L in (0.5, 2.0, 7.0):
            assert ef.mu_amplitude_product(1, L) == pytest.approx(PI**2 / L**2, rel=1e-15)

    def test_cubic_case(self):
        assert ef.mu_amplitude_product(3, 1) == pytest.approx(MU_A_3, rel=1e-14)

    def test_shooting_decides_the_exponent_sign(self):
        # mu A^(p-1) is the invariant; mu A^(-(p-1)) would vary with mu
        p, L = 3.0, 1.0
        products, inverted = [], []
        for mu in (0.5, 1.0, 4.0):
            prof = ef.shoot(p, mu, L)
            products.append(mu * prof.amplitude ** (p - 1))
            inverted.append(mu * prof.amplitude ** (1 - p))
        assert np.ptp(products) / products[0] < 1e-9
        assert products[0] == pytest.approx(ef.mu_amplitude_product(p, L), rel=1e-9)
        assert np.ptp(inverted) / inverted[0] > 1.0

    def test_half_length_inverts_the_product(self):
        assert ef.half_length(1, PI**2, 1.0) == pytest.approx(1.0, rel=1e-14)
        assert ef.half_length(3, 1.0, A_3) == pytest.approx(1.0, rel=1e-12)
        assert ef.half_length(3, 1.0, 2 * A_3) == pytest.approx(0.5, rel=1e-12)

    def test_amplitude_undefined_for_linear_case(self):
        with pytest.raises(DomainError):
            ef.amplitude_for(1.0, PI**2, 1.0)

    @pytest.mark.parametrize("args", [(0.5, 1.0), (3.0, 0.0), (3.0, -1.0)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            ef.mu_amplitude_product(*args)


class TestFirstIntegral:
    def test_linear_case_is_the_sine(self):
        prof = ef.profile_from_first_integral(1.0, 1.0, 1.0)
        x = prof.profile.nodes
        assert np.max(np.abs(prof.profile.values - np.sin(PI * x))) < 1e-8

    def test_cubic_multiplier(self):
        prof = ef.profile_from_first_integral(3.0, 1.0, 3.70815)
        assert prof.mu == pytest.approx(1.0, rel=1e-5)
        assert ef.profile_from_first_integral(3.0, 1.0, A_3).mu == pytest.approx(1.0, rel=1e-14)

    @pytest.mark.parametrize("p, A", [(1.5, 0.3), (2.0, 5.0), (3.0, 1.0), (5.0, 2.0)])
    def test_peak_equals_amplitude(self, p, A):
        prof = ef.profile_from_first_integral(p, 2.0, A, n=400)
        assert np.max(prof.profile.values) == pytest.approx(A, rel=1e-10)
        assert prof.boundary_residual < 1e-10

    def test_invalid_resolution(self):
        with pytest.raises(DomainError):
            ef.profile_from_first_integral(3.0, 1.0, 1.0, n=8)


class TestShooting:
    def test_linear_case(self):
        prof = ef.shoot(1.0, PI**2, 1.0)
        x = prof.profile.nodes
        assert np.max(np.abs(prof.profile.values - np.sin(PI * x))) < 1e-6
        assert prof.energy_identity_residual < 1e-10

    def test_linear_case_needs_the_eigenvalue(self):
        with pytest.raises(ef.SolverError) as info:
            ef.shoot(1.0, 9.0, 1.0)
        assert "mu" in info.value.diagnostics

    def test_cubic_amplitude(self):
        prof = ef.shoot(3.0, 1.0, 1.0)
        assert prof.amplitude == pytest.approx(A_3, rel=1e-9)
        assert prof.energy == pytest.approx(E_3, rel=1e-9)
        assert prof.energy_identity_residual < 1e-7

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 5.0])
    def test_two_methods_agree(self, p):
        shot = ef.shoot(p, 1.0, 1.0, n=4000)
        quad = ef.profile_from_first_integral(p, 1.0, shot.amplitude, n=4000)
        assert np.max(np.abs(shot.profile.values - quad.profile.values)) <= 1e-6

    def test_symmetric_single_bump(self):
        prof = ef.shoot(2.5, 3.0, 2.0, n=1000)
        u = prof.profile.values
        peak = prof.profile.nodes[np.argmax(u)]
        assert abs(peak - 1.0) <= 2 * prof.profile.step
        assert np.all(u[1:-1] > 0)
        rises = np.diff(u) > 0
        assert np.count_nonzero(rises[1:] != rises[:-1]) == 1
        assert np.max(np.abs(u - u[::-1])) < 1e-9 * prof.amplitude

    @pytest.mark.parametrize("p", [1.5, 3.0, 5.0])
    def test_amplitude_scaling_law(self, p):
        a1 = ef.shoot(p, 1.0, 1.0).amplitude
        a16 = ef.shoot(p, 16.0, 1.0).amplitude
        assert a1 / a16 == pytest.approx(16.0 ** (1.0 / (p - 1.0)), rel=1e-5)

    def test_residuals_under_refinement(self):
        # u' is carried exactly, so E = mu F holds to rounding at every n;
        # the second-difference ODE residual shows the O(n^-2) grid error
        ode, ident = [], []
        for n in (500, 1000, 2000, 4000):
            prof = ef.shoot(3.0, 1.0, 1.0, n=n)
            ode.append(prof.ode_residual)
            ident.append(prof.energy_identity_residual)
            assert prof.energy_identity_residual <= 1e-7 * (4000 / n) ** 2
        orders = [math.log2(a / b) for a, b in zip(ode, ode[1:])]
        assert min(orders) > 1.9


class TestProfileOutput:
    def test_sidecar_and_csv(self, tmp_path):
        prof = ef.shoot(3.0, 1.0, 1.0, n=200)
        prof.write(tmp_path / "u.csv", tmp_path / "u.json")
        meta = json.loads((tmp_path / "u.json").read_text())
        assert meta["schema_version"] == "1.0"
        assert meta["A"] == prof.amplitude and meta["n"] == 200
        assert (tmp_path / "u.csv").read_text().startswith("x,u\n")

    def test_energy_identity_helper(self):
        prof = ef.shoot(2.0, 1.0, 1.0, n=500)
        assert ef.energy_identity_residual(prof) == prof.energy_identity_residual
