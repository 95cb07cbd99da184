import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copvar import extremal
from copvar.cofunc import CoCandidate, a0_from_c, a1_from_c, laurent_oracle
from copvar.extremal import (
    bisect,
    counterexample_coeff,
    counterexample_margin,
    counterexample_search,
    counterexample_threshold,
    gmax,
    kernel_eval,
    kernel_identity_residual,
    kernel_positivity,
    phi_functional,
    q_poly,
    q_vertex,
    s_poly,
    s_root,
)
from copvar.regions import A0_P_MAX, A1_P_MAX, a1_modulus_bound, re_a0_lower_bound
from copvar.schwarz import Blaschke, Constant, MoebiusX, Rotation, coefficients_at, sample
from copvar.series import ContourSpec, contour_coefficient


def kappa_reference(p, z):
    """Term-by-term evaluation, written independently of kernel_eval."""
    first = 1.0 / ((1 - p**4) * (z - p))
    second = (2 * p - p**3) / ((1 + p**2) * (z - p) ** 2)
    third = (p**2 - p**4) / ((1 + p**2) * (z - p) ** 3)
    return first + second + third


class TestBisect:
    def test_sqrt2(self):
        assert bisect(lambda x: x * x - 2, 0, 2) == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_no_sign_change(self):
        with pytest.raises(ValueError):
            bisect(lambda x: x * x + 1, -1, 1)


class TestKernels:
    def test_kappa_value(self):
        # exact rational value from a symbolic evaluation
        assert kernel_eval(0.2, 0.3, "kappa") == pytest.approx(84.631410256410256, rel=1e-13)
        assert kernel_eval(0.2, 0.3, "kappa") == pytest.approx(kappa_reference(0.2, 0.3), rel=1e-14)

    @pytest.mark.parametrize("p", [0.1, 0.25, 0.6])
    def test_same_singular_part(self, p):
        diff = lambda z: kernel_eval(p, z, "kappa") - kernel_eval(p, z, "K")  # noqa: E731
        contour = ContourSpec(p, min(p, 1 - p) / 2)
        assert abs(contour_coefficient(diff, contour, -1)) < 1e-10
        # and the difference has no principal part: integrate against (z-p) and (z-p)^2
        for k in (1, 2):
            g = lambda z, k=k: diff(z) * (z - p) ** k  # noqa: E731
            assert abs(contour_coefficient(g, contour, -1)) < 1e-10

    def test_circle_values_real(self):
        theta = np.linspace(0, 2 * math.pi, 101)
        v = extremal.circle_kernel_values(0.25, theta)
        assert np.max(np.abs(v.imag)) < 1e-12

    def test_singular_input(self):
        with pytest.raises(ValueError):
            kernel_eval(0.3, 0.3)
        with pytest.raises(ValueError):
            kernel_eval(0.5, 2.0, "K")
        with pytest.raises(ValueError):
            kernel_eval(0.5, 0.1, "nope")


class TestPolynomials:
    def test_q_value(self):
        assert q_poly(0.2, 0.5) == pytest.approx(11439 / 15625, abs=1e-15)

    @pytest.mark.parametrize("p", np.linspace(0.02, 0.98, 25))
    def test_q_at_minus_one_is_s(self, p):
        assert q_poly(p, -1.0) == pytest.approx(s_poly(p), abs=1e-12)

    @pytest.mark.parametrize("p", np.linspace(0.02, 0.98, 25))
    def test_vertex_beyond_one(self, p):
        xv = q_vertex(p)
        assert xv > 1
        h = 1e-6
        assert q_poly(p, xv) >= q_poly(p, xv + h) and q_poly(p, xv) >= q_poly(p, xv - h)

    def test_s_values(self):
        assert s_poly(0.1) == pytest.approx(0.907742, abs=1e-12)
        assert s_poly(0.35) == pytest.approx(-0.51483346875, abs=1e-12)
        assert abs(s_poly(1 - math.sqrt(2) / 2)) < 1e-9

    def test_s_factorisation(self):
        # S(p) = (1+p)^4 (2p^2 - 4p + 1), checked by expansion on a grid
        for p in np.linspace(0, 1, 11):
            assert s_poly(p) == pytest.approx((1 + p) ** 4 * (2 * p * p - 4 * p + 1), abs=1e-12)

    def test_s_decreasing(self):
        p = np.linspace(1e-3, 1, 1000)
        assert np.all(np.diff(s_poly(p)) < 0)

    def test_root(self):
        assert s_root() == pytest.approx(1 - math.sqrt(2) / 2, abs=1e-9)


class TestIdentity:
    def test_fixed_points(self):
        assert kernel_identity_residual(0.2, math.pi / 3) < 1e-12
        for theta in (0.0, math.pi):
            assert kernel_identity_residual(0.3, theta) < 1e-12

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0.01, 0.99), st.floats(0, 2 * math.pi))
    def test_random(self, p, theta):
        assert kernel_identity_residual(p, theta) < 1e-10


class TestPositivity:
    def test_positive_small_p(self):
        r = kernel_positivity(0.25, 1024)
        assert r.positive
        assert r.mean.real == pytest.approx(1 / (1 - 0.25**4), abs=1e-12)
        assert r.mean.real == pytest.approx(1.0039216, abs=1e-7)

    def test_negative_large_p(self):
        r = kernel_positivity(0.35, 1024)
        assert r.min_real < 0
        assert r.argmin_theta == pytest.approx(math.pi)
        assert r.min_real == pytest.approx(s_poly(0.35) / ((1 + 0.35**2) * (1 + 0.35) ** 6), rel=1e-12)

    @pytest.mark.parametrize("p", [0.05, 0.2, 0.29, 0.5, 0.8])
    def test_mean(self, p):
        assert abs(kernel_positivity(p, 512).mean - 1 / (1 - p**4)) < 1e-12

    def test_grid_minimum(self):
        with pytest.raises(ValueError):
            kernel_positivity(0.2, 128)


class TestPhi:
    def test_constant_one(self):
        for p in (0.1, 0.25, A1_P_MAX):
            assert phi_functional(p, Constant(1)) == pytest.approx(1 / (1 - p**4), abs=1e-15)
            assert abs(phi_functional(p, Constant(1), "contour") - 1 / (1 - p**4)) < 1e-12

    def test_zero(self):
        assert phi_functional(0.25, Constant(0)) == 0
        assert abs(phi_functional(0.25, Constant(0), "contour")) == 0

    @pytest.mark.parametrize("seed", range(15))
    def test_modes_agree(self, seed):
        spec = sample(seed, 3)
        a = phi_functional(0.25, spec)
        for kernel in ("kappa", "K"):
            b = phi_functional(0.25, spec, "contour", kernel=kernel)
            assert abs(a - b) < 1e-9
        assert abs(a) <= 1 / (1 - 0.25**4) + 1e-9

    def test_unit_circle_contour(self):
        spec = Blaschke(1j, [0.3 - 0.2j, -0.5])
        a = phi_functional(0.2, spec)
        b = phi_functional(0.2, spec, "contour", radius=1.0, nodes=1024)
        assert abs(a - b) < 1e-10

    @pytest.mark.parametrize("theta", np.linspace(0, 2 * math.pi, 9))
    def test_rotation_attains_bound(self, theta):
        p = 0.2
        assert abs(phi_functional(p, Rotation(theta))) == pytest.approx(1 / (1 - p**4), abs=1e-12)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            phi_functional(0.2, Constant(0), "magic")
        with pytest.raises(ValueError):
            phi_functional(0.2, Constant(0), "contour", radius=0.1)


class TestGmax:
    def test_small_p(self):
        assert gmax(0.5) == (1.75, 1.0)

    def test_large_p(self):
        value, x = gmax(0.9)
        assert value == pytest.approx(1.2933611111111111, abs=1e-13)
        assert x == pytest.approx(0.66111111111111111, abs=1e-13)

    def test_threshold_continuity(self):
        p = A0_P_MAX
        value, x = gmax(p)
        assert x == pytest.approx(1.0, abs=1e-12)
        assert value == pytest.approx(2 - p * p, abs=1e-12)
        v2, _ = gmax(p + 1e-9)
        assert v2 == pytest.approx(value, abs=1e-8)

    @pytest.mark.parametrize("p", np.linspace(0.05, 0.95, 19))
    def test_against_dense_grid(self, p):
        x = np.linspace(0, 1, 200001)
        g = (2 - p * p) * x + p * (1 - x * x)
        assert gmax(p)[0] == pytest.approx(g.max(), abs=1e-9)


class TestCounterexampleCoeff:
    def test_threshold_annihilates(self):
        p = 0.8
        x = extremal.a0_threshold_x(p)
        assert x == pytest.approx(0.7)
        assert counterexample_coeff(p, x, "a0") == pytest.approx(re_a0_lower_bound(p), abs=1e-13)

    def test_theorem3_value(self):
        v = counterexample_coeff(0.8, 0.9, "a0")
        assert v == pytest.approx(-6.2113821138211382, abs=1e-12)
        assert v < re_a0_lower_bound(0.8)

    def test_theorem5_value(self):
        v = counterexample_coeff(0.5, 0.9, "a1")
        assert v == pytest.approx(-0.61499259259259259, abs=1e-12)
        assert abs(v) - 16 / 27 == pytest.approx(0.0224, abs=1e-4)

    @pytest.mark.parametrize("p", np.linspace(0.05, 0.95, 10))
    @pytest.mark.parametrize("x", np.linspace(0, 0.99, 12))
    def test_matches_coefficient_route(self, p, x):
        c0, c1, c2 = coefficients_at(MoebiusX(x), p, 2).c
        assert counterexample_coeff(p, x, "a0") == pytest.approx(a0_from_c(p, c0, c1).real, abs=1e-12 * max(1, 1 / (1 - p * p) ** 2))
        assert counterexample_coeff(p, x, "a1") == pytest.approx(a1_from_c(p, c0, c1, c2).real, abs=1e-12 * max(1, 1 / (1 - p * p) ** 3))

    @pytest.mark.parametrize("p", [0.3, 0.5, 0.8])
    def test_margin_is_bound_exceedance(self, p):
        x = np.linspace(0, 1, 50)
        m0 = counterexample_margin(p, x, "a0")
        assert np.allclose(m0, re_a0_lower_bound(p) - counterexample_coeff(p, x, "a0"), atol=1e-12)
        m1 = counterexample_margin(p, x, "a1")
        assert np.allclose(m1, np.abs(counterexample_coeff(p, x, "a1")) - a1_modulus_bound(p), atol=1e-12)

    def test_r_poly(self):
        for p in (0.3, 0.6):
            assert extremal.r_poly(p, 1.0) == pytest.approx(-1 + 4 * p - 2 * p * p)

    def test_oracle_cross_check(self):
        a0 = laurent_oracle(CoCandidate(0.8, MoebiusX(0.9))).a_0
        assert abs(a0 - counterexample_coeff(0.8, 0.9, "a0")) < 1e-9
        a1 = laurent_oracle(CoCandidate(0.5, MoebiusX(0.9))).a_1
        assert abs(a1 - counterexample_coeff(0.5, 0.9, "a1")) < 1e-9


class TestCounterexampleSearch:
    def test_a0_large_p(self):
        f = counterexample_search(0.8, "a0")
        assert f is not None
        assert 0.7 < f.x < 1
        assert f.margin > 0.03
        assert f.value == pytest.approx(f.bound - f.margin, abs=1e-12)

    def test_a0_small_p(self):
        assert counterexample_search(0.5, "a0") is None

    def test_a1(self):
        f = counterexample_search(0.5, "a1")
        assert f is not None and f.margin >= 0.0224
        assert abs(f.value) - f.bound == pytest.approx(f.margin, abs=1e-12)

    def test_none_below_both(self):
        assert counterexample_search(0.2, "a0") is None
        assert counterexample_search(0.2, "a1") is None

    @pytest.mark.parametrize("which", ["a0", "a1"])
    def test_existence_matches_threshold(self, which):
        limit = A0_P_MAX if which == "a0" else A1_P_MAX
        for p in np.linspace(0.05, 0.95, 37):
            if abs(p - limit) > 1e-3:
                assert (counterexample_search(p, which) is not None) == (p > limit)

    @pytest.mark.parametrize("which, limit", [("a0", A0_P_MAX), ("a1", A1_P_MAX)])
    def test_threshold_bisection(self, which, limit):
        assert counterexample_threshold(which) == pytest.approx(limit, abs=1e-6)
