"""Split minima, sharp constants, combinators, and the layer infimum."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glscalc.calculus import (
    OperationDescriptor,
    beckner_constant,
    combine_bilinear_integral,
    combine_convolution,
    combine_hausdorff,
    combine_infimal_convolution,
    combine_maximal,
    combine_product,
    combine_tensor,
    combine_toeplitz,
    conjugate_split_min,
    convolution_descriptor,
    hausdorff_envelope_exponent,
    hausdorff_split_min,
    holder_split_min,
    identity_descriptor,
    kappa_layer_infimum,
    maximal_envelope,
    maximal_split_min,
    product_descriptor,
    split_constant,
)
from glscalc.errors import (
    ArityMismatchError,
    ConstraintViolationError,
    EmptyDomainError,
    InvalidParameterError,
)
from glscalc.psi import INF, DegeneratePsi, PowerPsi, WindowPsi


class TestSplitMinima:
    def test_equal_powers_constant_four(self):
        assert split_constant(1.0, 1.0) == 4.0

    def test_holder_argmin(self):
        val, a, b = holder_split_min(1.0, 3.0)
        assert a == pytest.approx(4.0)
        assert b == pytest.approx(4.0 / 3.0)
        assert val == pytest.approx(a ** 1.0 * b ** 3.0)
        assert 1.0 / a + 1.0 / b == pytest.approx(1.0)

    def test_conjugate_split_scales_by_power(self):
        g1, g2, p = 0.7, 1.9, 3.0
        val, p1, p2 = conjugate_split_min(g1, g2, p)
        base, _, _ = holder_split_min(g1, g2)
        assert val == pytest.approx(base * p ** (g1 + g2))
        assert 1.0 / p1 + 1.0 / p2 == pytest.approx(1.0 / p)

    @given(st.floats(0.1, 10.0), st.floats(0.1, 10.0))
    @settings(max_examples=100)
    def test_holder_min_is_a_lower_bound(self, g1, g2):
        val, _, _ = holder_split_min(g1, g2)
        for a in np.geomspace(1.001, 100.0, 30):
            b = a / (a - 1.0)
            assert val <= a ** g1 * b ** g2 * (1.0 + 1e-9)

    def test_invalid_powers(self):
        with pytest.raises(InvalidParameterError):
            holder_split_min(0.0, 1.0)
        with pytest.raises(InvalidParameterError):
            conjugate_split_min(1.0, 1.0, 0.5)


class TestBecknerConstant:
    def test_reference_value(self):
        r, g = beckner_constant(1, 4.0 / 3.0, 4.0 / 3.0)
        assert r == pytest.approx(2.0)
        assert g == pytest.approx(0.87738, abs=5e-6)

    def test_endpoints_are_one(self):
        r, g = beckner_constant(1, 1.0, 1.0)
        assert r == pytest.approx(1.0)
        assert g == pytest.approx(1.0)

    def test_infinite_output_exponent(self):
        r, g = beckner_constant(1, 2.0, 2.0)
        assert math.isinf(r)
        assert 0.0 < g <= 1.0

    def test_dimension_is_an_exponent(self):
        _, g1 = beckner_constant(1, 1.5, 3.0)
        _, g3 = beckner_constant(3, 1.5, 3.0)
        assert g3 == pytest.approx(g1 ** 3)

    @given(st.floats(0.501, 0.999), st.floats(0.501, 0.999))
    @settings(max_examples=200)
    def test_never_exceeds_one(self, s1, s2):
        _, g = beckner_constant(1, 1.0 / s1, 1.0 / s2)
        assert g <= 1.0 + 1e-12

    def test_outside_band_raises(self):
        with pytest.raises(ConstraintViolationError):
            beckner_constant(1, 8.0, 8.0)


class TestCombinators:
    def test_product_of_power_psis_matches_closed_form(self):
        # the split minimum of b1 (a p)**g1 * b2 (b p)**g2 has an explicit value
        g1, g2 = 0.8, 1.7
        kappa = combine_product(PowerPsi(2.0, g1), PowerPsi(3.0, g2))
        for p in (1.0, 2.0, 8.0):
            expect = 2.0 * 3.0 * split_constant(g1, g2) * p ** (g1 + g2)
            assert kappa(p) == pytest.approx(expect, rel=1e-8)

    def test_product_degenerate_pair(self):
        # both factors pinned: only the single split 1/4 + 1/4 = 1/2 works
        kappa = combine_product(DegeneratePsi(4.0), DegeneratePsi(4.0))
        assert kappa(2.0) == pytest.approx(1.0)
        assert math.isinf(kappa(3.0))

    def test_product_infeasible_degenerates_raise(self):
        with pytest.raises(EmptyDomainError):
            combine_product(DegeneratePsi(1.5), DegeneratePsi(1.5))

    def test_tensor_is_pointwise_product(self):
        kappa = combine_tensor(PowerPsi(1.0, 1.0), PowerPsi(1.0, 0.5))
        assert kappa(4.0) == pytest.approx(4.0 * 2.0)

    def test_tensor_empty_intersection_raises(self):
        with pytest.raises(EmptyDomainError):
            combine_tensor(
                WindowPsi(1.0, 1.0, 2.0, 0.0, 0.0),
                WindowPsi(1.0, 3.0, 4.0, 0.0, 0.0),
            )

    def test_convolution_degenerate_layer_point(self):
        # zeta_i pinned at 4/3 forces 1/p1 + 1/p2 = 1.5, so p = 2 and the
        # value is exactly the sharp constant there
        kappa = combine_convolution(DegeneratePsi(4.0 / 3.0), DegeneratePsi(4.0 / 3.0), 1)
        _, g = beckner_constant(1, 4.0 / 3.0, 4.0 / 3.0)
        assert kappa(2.0) == pytest.approx(g, rel=1e-9)
        assert math.isinf(kappa(4.0))

    def test_convolution_dominated_by_any_feasible_split(self):
        kappa = combine_convolution(PowerPsi(1.0, 1.0), PowerPsi(1.0, 1.0), 1)
        for p in (1.5, 3.0, 10.0):
            # candidate split p1 = p2 solving 2/p1 = 1 + 1/p
            p1 = 2.0 / (1.0 + 1.0 / p)
            _, g = beckner_constant(1, p1, p1)
            assert kappa(p) <= g * p1 * p1 * (1.0 + 1e-9)

    def test_infimal_convolution_factor(self):
        kappa, relaxed = combine_infimal_convolution(PowerPsi(1.0, 1.0), 2, 3)
        assert relaxed == 9.0
        assert kappa(2.0) == pytest.approx(3.0 ** (2.0 / 2.0) * 2.0)
        assert kappa(4.0) == pytest.approx(3.0 ** 0.5 * 4.0)

    def test_toeplitz_form(self):
        tau = combine_toeplitz(1.0, 1.0)
        assert math.isinf(tau(1.0))
        assert tau(2.0) == pytest.approx(4.0 * 2.0 ** 2)
        assert tau(3.0) == pytest.approx(4.0 * (3.0 / 2.0) ** 2)

    def test_bilinear_bounded_kernel(self):
        ell = 2.5

        def kernel_norm(p, p1, p2):
            return ell if (p1 == p and p2 == p) else INF

        kappa = combine_bilinear_integral(PowerPsi(1.0, 1.0), PowerPsi(1.0, 0.5), kernel_norm)
        assert kappa(4.0) == pytest.approx(ell * 4.0 * 2.0, rel=1e-9)

    def test_bilinear_unconstrained_kernel_minimizes(self):
        # constant finite kernel norm: minimum over the quadrant is at p1 = p2 = 1
        kappa = combine_bilinear_integral(
            PowerPsi(1.0, 1.0), PowerPsi(1.0, 1.0), lambda p, p1, p2: 1.0
        )
        assert kappa(5.0) == pytest.approx(1.0, rel=1e-6)


class TestMaximal:
    def test_value_at_one(self):
        z, q = maximal_split_min(1.0, 2, 1.0)
        assert z == pytest.approx(16.0, abs=1e-8)
        assert sorted(q) == pytest.approx([2.0, 2.0], rel=1e-4)

    def test_value_at_two(self):
        z, _ = maximal_split_min(1.0, 2, 2.0)
        assert z == pytest.approx(256.0 / 9.0, rel=1e-8)

    def test_symmetric_point_is_optimal(self):
        # the symmetric candidate p_i = d*p is a stationary point; the
        # numeric minimum must not exceed it
        for p in (1.0, 2.0, 8.0):
            z, _ = maximal_split_min(1.5, 3, p)
            sym = (3.0 * p) ** (3 * 2.5) / (3.0 * p - 1.0) ** 3
            assert z <= sym * (1.0 + 1e-8)

    def test_envelope_agrees_only_at_one(self):
        z1, _ = maximal_split_min(1.0, 2, 1.0)
        assert maximal_envelope(1.0, 2, 1.0) == pytest.approx(z1, rel=1e-7)
        z8, _ = maximal_split_min(1.0, 2, 8.0)
        assert maximal_envelope(1.0, 2, 8.0) != pytest.approx(z8, rel=0.5)

    def test_combine_scales_by_envelope_constant(self):
        kappa1 = combine_maximal(1.0, 2, 1.0)
        kappa3 = combine_maximal(1.0, 2, 3.0)
        assert kappa3(2.0) == pytest.approx(9.0 * kappa1(2.0))


class TestHausdorff:
    def test_single_factor_closed_form(self):
        # m = 1: the constrained minimum is just p**(gamma+2) / (p - 1)
        z, q = hausdorff_split_min(1.0, 1, 2.0)
        assert z == pytest.approx(2.0 ** 3 / 1.0)
        assert q == pytest.approx([2.0])

    def test_envelope_exponent(self):
        assert hausdorff_envelope_exponent(1.0, 2) == 6.0

    def test_combine_uses_envelope_constant(self):
        kappa = combine_hausdorff(1.0, 1, 2.0)
        assert kappa(2.0) == pytest.approx(2.0 * 8.0)


class TestLayerInfimum:
    def test_identity_descriptor(self):
        psi = PowerPsi(1.0, 1.0)
        sol = kappa_layer_infimum(identity_descriptor(), [psi], 3.0)
        assert sol.kappa == pytest.approx(3.0)
        assert sol.argmin_q == pytest.approx((3.0,))

    def test_product_descriptor_matches_closed_form(self):
        g1, g2 = 1.0, 2.0
        desc = product_descriptor()
        psis = [PowerPsi(1.0, g1), PowerPsi(1.0, g2)]
        for p in (1.5, 4.0):
            sol = kappa_layer_infimum(desc, psis, p)
            expect, p1, p2 = conjugate_split_min(g1, g2, p)
            assert sol.kappa == pytest.approx(expect, rel=1e-6)
            assert sol.argmin_q[0] == pytest.approx(p1, rel=1e-3)
            assert sol.argmin_q[1] == pytest.approx(p2, rel=1e-3)
            assert sol.status == "interior"

    def test_convolution_descriptor_matches_combinator(self):
        desc = convolution_descriptor(1)
        psis = [PowerPsi(1.0, 1.0), PowerPsi(1.0, 1.0)]
        kappa = combine_convolution(psis[0], psis[1], 1)
        for p in (2.0, 6.0):
            sol = kappa_layer_infimum(desc, psis, p)
            assert sol.kappa == pytest.approx(kappa(p), rel=1e-6)

    def test_empty_layer(self):
        desc = product_descriptor()
        sol = kappa_layer_infimum(desc, [DegeneratePsi(4.0), DegeneratePsi(4.0)], 3.0)
        assert math.isinf(sol.kappa)
        assert sol.status == "empty-layer"

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatchError):
            kappa_layer_infimum(identity_descriptor(), [PowerPsi(1.0, 1.0)] * 2, 2.0)

    def test_descriptor_validation(self):
        with pytest.raises(ArityMismatchError):
            OperationDescriptor(
                arity=2,
                domain=lambda q: True,
                theta=lambda q: q[0],
                tau=(lambda x: x,),
                alpha=(1.0,),
                k_const=lambda q: 1.0,
            )
