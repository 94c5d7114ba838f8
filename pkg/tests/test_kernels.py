"""Tests for the smooth truncation kernels and the cancellation constant."""

import numpy as np
import pytest
from scipy import integrate

from jumpvol import Kernel, ParameterError, c_tilde, cancelling_kernel, kernel_moment
from jumpvol.kernels import composite, parse_kernel, phi, psi

E_M5_21 = float(np.exp(-5.0 / 21.0))  # shared value of phi and psi at |x| = 3/2


class TestPhi:
    def test_inner_region_is_one(self):
        x = np.linspace(-0.999, 0.999, 41)
        np.testing.assert_array_equal(phi(x), np.ones_like(x))

    def test_outside_support_is_zero(self):
        assert phi(2.0) == 0.0
        assert phi(-5.0) == 0.0

    def test_midpoint_value(self):
        # exp(1/3 + 1/(x^2 - 4)) at x = 3/2 is exp(-5/21)
        assert phi(1.5) == pytest.approx(E_M5_21, rel=1e-14)

    def test_even(self):
        x = np.array([0.3, 1.2, 1.7, 2.5])
        np.testing.assert_array_equal(phi(x), phi(-x))

    @pytest.mark.parametrize("b", [1.0, 2.0])
    def test_continuity_at_breakpoints(self, b):
        eps = 1e-9
        assert abs(phi(b - eps) - phi(b + eps)) < 1e-6

    def test_monotone_on_transition(self):
        x = np.linspace(1.0, 2.0, 200)
        assert np.all(np.diff(phi(x)) <= 0)

    def test_scalar_in_scalar_out(self):
        assert np.isscalar(phi(0.5)) or np.ndim(phi(0.5)) == 0


class TestPsi:
    def test_zero_inside_and_beyond(self):
        assert psi(0.5, 4.0) == 0.0
        assert psi(1.0, 4.0) == 0.0
        assert psi(4.0, 4.0) == 0.0
        assert psi(7.0, 4.0) == 0.0

    def test_midpoint_matches_phi(self):
        assert psi(1.5, 4.0) == pytest.approx(E_M5_21, rel=1e-14)

    @pytest.mark.parametrize("M", [2.5, 4.0, 8.0])
    @pytest.mark.parametrize("frac", [0.0, 0.5, 1.0])
    def test_continuity_at_breakpoints(self, M, frac):
        b = (1.0, 1.5, M)[int(frac * 2)]
        eps = 1e-9
        assert abs(psi(b - eps, M) - psi(b + eps, M)) < 1e-6

    def test_rejects_small_m(self):
        with pytest.raises(ParameterError):
            psi(2.0, 1.5)

    def test_even(self):
        x = np.array([1.2, 1.5, 2.0, 3.9])
        np.testing.assert_array_equal(psi(x, 4.0), psi(-x, 4.0))


class TestComposite:
    def test_equals_phi_inside(self):
        x = np.linspace(-1.0, 1.0, 21)
        np.testing.assert_array_equal(composite(x, -0.8, 4.0), phi(x))

    def test_linear_combination(self):
        x = np.linspace(0.0, 5.0, 101)
        c = -0.7
        np.testing.assert_allclose(
            composite(x, c, 4.0), phi(x) + c * psi(x, 4.0), rtol=1e-14
        )


class TestKernelDataclass:
    def test_call_dispatch(self):
        assert Kernel("phi")(0.5) == 1.0
        assert Kernel("psi", M=4.0)(0.5) == 0.0

    def test_support_radius(self):
        assert Kernel("phi").support_radius == 2.0
        assert Kernel("psi", M=6.0).support_radius == 6.0
        assert Kernel("composite", M=5.0, c=-0.5).support_radius == 5.0

    def test_rejects_unknown_kind(self):
        with pytest.raises(ParameterError):
            Kernel("box")


class TestParseKernel:
    def test_phi(self):
        k = parse_kernel("phi", 1.0)
        assert k.kind == "phi"

    def test_psi_with_m(self):
        k = parse_kernel("psi:M=6", 1.0)
        assert k.kind == "psi" and k.M == 6.0

    def test_composite_computes_c(self):
        k = parse_kernel("composite:M=4", 1.0)
        assert k.c == pytest.approx(c_tilde(1.0, 4.0))

    def test_rejects_garbage(self):
        with pytest.raises(ParameterError):
            parse_kernel("phi:M=4:extra", 1.0)
        with pytest.raises(ParameterError):
            parse_kernel("triangle", 1.0)


class TestKernelMoment:
    """kernel_moment(K, alpha) = int K(u) |u|^(1-alpha) du over the real line."""

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_phi_against_direct_quadrature(self, alpha):
        direct, _ = integrate.quad(
            lambda u: phi(u) * u ** (1 - alpha), 0, 2, points=[1.0], limit=200
        )
        assert kernel_moment(Kernel("phi"), alpha) == pytest.approx(
            2 * direct, rel=1e-8
        )

    def test_singular_inner_cell(self):
        # for alpha > 1 the integrand is singular at 0; the inner cell is
        # handled analytically, so the value is still finite and accurate
        alpha = 1.9
        val = kernel_moment(Kernel("phi"), alpha)
        inner = 2.0 / (2.0 - alpha)
        assert val > inner  # transition band adds a positive amount

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_cancellation(self, alpha):
        """The composite kernel's weighted moment vanishes by construction."""
        k = cancelling_kernel(alpha, 4.0)
        val, _ = integrate.quad(
            lambda u: k(u) * u ** (1 - alpha),
            0,
            4.0,
            points=[1.0, 1.5, 2.0],
            limit=400,
        )
        assert abs(2 * val) < 1e-8

    def test_c_tilde_negative(self):
        # phi's moment is positive and psi's is positive, so c_tilde < 0
        assert c_tilde(1.2, 4.0) < 0


class TestKernelValuesRange:
    def test_phi_between_zero_and_one(self):
        x = np.linspace(-3, 3, 601)
        v = phi(x)
        assert np.all(v >= 0) and np.all(v <= 1)

    def test_psi_between_zero_and_one(self):
        x = np.linspace(-9, 9, 901)
        v = psi(x, 8.0)
        assert np.all(v >= 0) and np.all(v <= 1)
