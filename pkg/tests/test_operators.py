"""Semi-discrete and fully discrete operators, Cesaro machinery, norms."""

import numpy as np
import pytest

from sphapprox.cubature import product_rule_s2
from sphapprox.filters import make_hermite, make_riesz, make_smooth, make_step, make_vp
from sphapprox.kernel import ZonalKernel, build_kernel
from sphapprox.operators import (
    CesaroSpec,
    ZonalExpansion,
    _discrete_lebesgue,
    apply_fully_discrete,
    apply_semidiscrete,
    cesaro_mean,
    dyadic_block,
    operator_norm_fully_discrete,
    operator_norm_semidiscrete,
    summation_by_parts_apply,
)
from sphapprox.points import north_pole, random_unit_vectors


def random_expansion(rng, d, degree, pole=None):
    if pole is None:
        pole = random_unit_vectors(rng, 1, d)[0]
    return ZonalExpansion(d=d, pole=pole, coeffs=rng.standard_normal(degree + 1))


class TestSemidiscrete:
    def test_reproduces_low_degree(self):
        f = ZonalExpansion(2, north_pole(2), np.array([1.0, 1.0]))
        out = apply_semidiscrete(make_step(), 1, f)
        np.testing.assert_array_equal(out.coeffs, [1.0, 1.0])

    def test_multiplier_action_on_single_mode(self):
        f = ZonalExpansion(2, north_pole(2), np.array([0.0, 0.0, 0.0, 1.0]))
        out = apply_semidiscrete(make_vp(), 2, f)
        assert out.coeffs[3] == pytest.approx(0.5)

    def test_output_degree_capped(self):
        rng = np.random.default_rng(0)
        f = random_expansion(rng, 2, 40)
        for h in (make_step(), make_vp(), make_smooth()):
            out = apply_semidiscrete(h, 4, f)
            assert out.degree <= 7

    def test_rejects_improper_filter(self):
        f = ZonalExpansion(2, north_pole(2), np.array([1.0]))
        with pytest.raises(ValueError):
            apply_semidiscrete(make_riesz(1.0), 4, f)

    def test_multiplier_composition_is_exact(self):
        rng = np.random.default_rng(1)
        f = random_expansion(rng, 2, 20)
        h, g = make_vp(), make_smooth()
        twice = apply_semidiscrete(h, 8, apply_semidiscrete(g, 16, f))
        ell = np.arange(16)
        expect = np.asarray(h(ell / 8)) * (np.asarray(g(ell / 16)) * f.coeffs[:16])
        np.testing.assert_array_equal(twice.coeffs, expect)

    def test_pole_invariance_under_rotation(self):
        rng = np.random.default_rng(2)
        f = random_expansion(rng, 2, 12, pole=north_pole(2))
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        f_rot = ZonalExpansion(2, q @ f.pole, f.coeffs)
        pts = random_unit_vectors(rng, 50, 2)
        np.testing.assert_allclose(f_rot(pts @ q.T), f(pts), rtol=1e-11, atol=1e-12)


class TestFullyDiscrete:
    def test_constant_reproduced(self):
        rule = product_rule_s2(11)
        va = apply_fully_discrete(make_vp(), 4, rule, lambda pts: np.ones(len(pts)))
        pts = random_unit_vectors(np.random.default_rng(3), 100, 2)
        np.testing.assert_allclose(va(pts), 1.0, atol=1e-12)

    def test_single_kernel_mode_reproduced(self):
        rng = np.random.default_rng(4)
        q = random_unit_vectors(rng, 1, 2)[0]
        f = ZonalExpansion(2, q, np.array([0.0, 0.0, 1.0]))  # K_2(q, .)
        rule = product_rule_s2(3 * 2 - 1 + 6)
        va = apply_fully_discrete(make_vp(), 2, rule, f)
        pts = random_unit_vectors(rng, 60, 2)
        np.testing.assert_allclose(va(pts), f(pts), atol=1e-10)

    def test_band_limited_agrees_with_semidiscrete(self):
        rng = np.random.default_rng(5)
        L = 8
        f = random_expansion(rng, 2, L)
        rule = product_rule_s2(3 * L - 1)
        va = apply_fully_discrete(make_vp(), L, rule, f)
        semi = apply_semidiscrete(make_vp(), L, f)
        pts = random_unit_vectors(rng, 80, 2)
        np.testing.assert_allclose(va(pts), semi(pts), atol=1e-10)

    def test_scalar_black_box_fallback(self):
        rule = product_rule_s2(11)

        def f(y):  # scalar-only callable
            return float(y[2]) ** 2

        va = apply_fully_discrete(make_vp(), 4, rule, f)
        pts = random_unit_vectors(np.random.default_rng(6), 40, 2)
        np.testing.assert_allclose(va(pts), pts[:, 2] ** 2, atol=1e-11)

    def test_rejects_low_degree_rule(self):
        rule = product_rule_s2(10)  # needs 3L-1 = 11
        with pytest.raises(ValueError, match="certified"):
            apply_fully_discrete(make_vp(), 4, rule, lambda pts: np.ones(len(pts)))


class TestOperatorNorms:
    def test_semidiscrete_step_analytic(self):
        assert operator_norm_semidiscrete(make_step(), 1, 2) == pytest.approx(5.0 / 3.0, rel=1e-13)

    def test_counterexample_growth(self):
        vals = [operator_norm_semidiscrete(make_riesz(0.5), L, 2) for L in (8, 16, 32, 64)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_discrete_norm_constant_kernel(self):
        rule = product_rule_s2(11)
        K = ZonalKernel(d=2, L=1, coeffs=np.array([1.0]), filter_name="const")
        vals = _discrete_lebesgue(K, rule, rule.nodes[:5])
        np.testing.assert_allclose(vals, 1.0, atol=1e-15)

    def test_discrete_comparable_to_semidiscrete(self):
        # the discrete Lebesgue sup may exceed the kernel L1 norm (only
        # uniform boundedness is guaranteed); measured factor frozen below
        L = 16
        rule = product_rule_s2(3 * L - 1)
        semi = operator_norm_semidiscrete(make_vp(), L, 2)
        disc = operator_norm_fully_discrete(make_vp(), L, rule, probes=500, seed=0)
        assert semi / 1.2 <= disc <= semi * 1.3
        assert disc / semi == pytest.approx(1.2467513, rel=1e-5)  # regression baseline

    def test_monotone_in_probe_count(self):
        L = 8
        rule = product_rule_s2(3 * L - 1)
        vals = [
            operator_norm_fully_discrete(make_vp(), L, rule, probes=n, seed=0)
            for n in (50, 200, 800)
        ]
        assert vals[0] <= vals[1] + 1e-12
        assert vals[1] <= vals[2] + 1e-12

    def test_at_least_one_for_proper_filters(self):
        L = 4
        rule = product_rule_s2(3 * L - 1)
        for h in (make_step(), make_vp(), make_smooth()):
            assert operator_norm_fully_discrete(h, L, rule, probes=100, seed=1) >= 1.0 - 1e-12


class TestCesaro:
    def test_order_zero_is_partial_sum(self):
        rng = np.random.default_rng(7)
        f = random_expansion(rng, 2, 10)
        out = cesaro_mean(CesaroSpec(0.0), 6, f)
        np.testing.assert_array_equal(out.coeffs, f.coeffs[:7])

    def test_order_one_binomials(self):
        f = ZonalExpansion(2, north_pole(2), np.array([1.0, 1.0]))
        out = cesaro_mean(CesaroSpec(1.0), 1, f)
        np.testing.assert_allclose(out.coeffs, [1.0, 0.5])

    def test_k_zero_keeps_constant_only(self):
        rng = np.random.default_rng(8)
        f = random_expansion(rng, 2, 5)
        out = cesaro_mean(CesaroSpec(2.0), 0, f)
        assert out.degree == 0
        assert out.coeffs[0] == f.coeffs[0]

    def test_weights_positive_and_seeded(self):
        spec = CesaroSpec(0.7)
        a = spec.numbers(20)
        assert a[0] == 1.0
        assert np.all(a > 0)


class TestSummationByParts:
    @pytest.mark.parametrize("r", [0, 1, 2])
    @pytest.mark.parametrize("L", [4, 8, 16])
    def test_identity_vp(self, r, L):
        rng = np.random.default_rng(100 + r + L)
        f = random_expansion(rng, 2, 3 * L)
        direct = apply_semidiscrete(make_vp(), L, f)
        via = summation_by_parts_apply(make_vp(), L, r, f)
        scale = np.max(np.abs(direct.coeffs))
        assert np.max(np.abs(direct.coeffs - via.coeffs)) <= 1e-10 * scale

    def test_identity_step_low_degree(self):
        rng = np.random.default_rng(9)
        f = random_expansion(rng, 2, 10)
        direct = apply_semidiscrete(make_step(), 4, f)
        via = summation_by_parts_apply(make_step(), 4, 0, f)
        np.testing.assert_allclose(via.coeffs, direct.coeffs, atol=1e-12)

    def test_zero_input(self):
        f = ZonalExpansion(2, north_pole(2), np.zeros(9))
        out = summation_by_parts_apply(make_vp(), 4, 1, f)
        assert np.all(out.coeffs == 0.0)


class TestDyadicBlocks:
    def test_low_degree_annihilated(self):
        f = ZonalExpansion(2, north_pole(2), np.array([0.3, -0.7]))
        out = dyadic_block(make_vp(), 1, f)
        assert np.max(np.abs(out.coeffs)) <= 1e-15

    def test_telescoping_to_full_operator(self):
        rng = np.random.default_rng(10)
        f = random_expansion(rng, 2, 40)
        R = 4
        acc = np.zeros(2 ** (R + 1))
        for r in range(R + 1):
            blk = dyadic_block(make_vp(), r, f)
            acc[: blk.degree + 1] += blk.coeffs
        ref = apply_semidiscrete(make_vp(), 2**R, f)
        diff = acc.copy()
        diff[: ref.degree + 1] -= ref.coeffs
        assert np.max(np.abs(diff)) <= 1e-12

    def test_block_l2_triangle_inequality(self):
        rng = np.random.default_rng(11)
        f = random_expansion(rng, 2, 30)
        for r in (1, 2, 3):
            blk = dyadic_block(make_vp(), r, f)
            hi = apply_semidiscrete(make_vp(), 2**r, f)
            lo = apply_semidiscrete(make_vp(), 2 ** (r - 1), f)

            def err_norm(g):
                n = max(f.degree, g.degree) + 1
                c = np.zeros(n)
                c[: f.degree + 1] += f.coeffs
                c[: g.degree + 1] -= g.coeffs
                return ZonalExpansion(2, f.pole, c).l2_norm()

            assert blk.l2_norm() <= err_norm(hi) + err_norm(lo) + 1e-12

    def test_block_degree_bound(self):
        rng = np.random.default_rng(12)
        f = random_expansion(rng, 2, 100)
        for r in (0, 1, 3):
            blk = dyadic_block(make_hermite(1), r, f)
            assert blk.degree <= 2 ** (r + 1)


def test_l2_norm_parseval():
    f = ZonalExpansion(2, north_pole(2), np.array([0.0, 1.0]))
    assert f.l2_norm() == pytest.approx(np.sqrt(3.0), rel=1e-14)
