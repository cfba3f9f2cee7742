import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from epdoublet.demo import DEMO_SPEC, DEMO_X_STAR
from epdoublet.errors import EvaluationDomainError, EvaluationRangeError
from epdoublet.jost import evaluate, symmetry_check
from epdoublet.potential import Binding, Layer, ParamPoint, PotentialSpec

FREE = PotentialSpec((), name="free")
WELL = PotentialSpec((Layer(1.0, -4.0),), name="well")
P0 = ParamPoint(0.0, 0.0)


def random_fourth_quadrant(rng, lo=0.05, hi=6.0):
    return complex(rng.uniform(lo, hi), -rng.uniform(lo, hi))


class TestFreePotential:
    def test_identity_and_zero_derivatives(self):
        rng = random.Random(7)
        for _ in range(100):
            k = random_fourth_quadrant(rng)
            v = evaluate(FREE, P0, k)
            assert abs(v.f - 1.0) < 1e-14
            assert abs(v.df_dk) < 1e-14
            assert abs(v.d2f_dk2) < 1e-14
            assert abs(v.d3f_dk3) < 1e-14
            assert np.all(np.abs(v.df_dx) < 1e-14)
            assert np.all(np.abs(v.d2f_dxdk) < 1e-14)


class TestDomainErrors:
    def test_k_zero_rejected(self):
        with pytest.raises(EvaluationDomainError):
            evaluate(WELL, P0, 0.0)

    def test_overflow_guarded(self):
        with pytest.raises(EvaluationRangeError):
            evaluate(WELL, P0, complex(1.0, -1e4))


class TestBranchIndependence:
    def test_sqrt_branch_flip_changes_nothing(self):
        # entries are entire in k^2 - V, so negating the square root in any
        # layer must leave every slot untouched
        k = 2.3 - 0.4j
        base = evaluate(DEMO_SPEC, DEMO_X_STAR, k)
        for layer in range(4):
            flipped = evaluate(DEMO_SPEC, DEMO_X_STAR, k, _flip_branch_layer=layer)
            assert abs(flipped.f - base.f) < 1e-12 * abs(base.f)
            assert abs(flipped.d3f_dk3 - base.d3f_dk3) < 1e-10 * abs(base.d3f_dk3)

    def test_series_and_closed_forms_agree(self):
        # near z = 0 the evaluation switches to the series branch; values on
        # the two sides of the threshold must join smoothly
        spec = PotentialSpec((Layer(1.0, 4.0),), (Binding(0, "height"),))
        for k in (2.001 - 1e-4j, 1.999 - 1e-4j, 2.1 - 0.3j):
            v = evaluate(spec, ParamPoint(4.0, 0.0), k)
            o = oracles.cauchy_dk(spec, ParamPoint(4.0, 0.0), k, 1, radius=0.02)
            assert abs(v.df_dk - o) < 1e-9 * max(1.0, abs(o))


class TestRealitySymmetry:
    def test_reflection_residual_vanishes(self):
        rng = random.Random(3)
        for _ in range(10):
            k = random_fourth_quadrant(rng)
            assert symmetry_check(DEMO_SPEC, DEMO_X_STAR, k) < 1e-10

    @given(
        st.floats(0.1, 5.0, allow_nan=False),
        st.floats(-2.0, -0.01, allow_nan=False),
    )
    @settings(max_examples=25, deadline=None)
    def test_reflection_residual_property(self, re, im):
        k = complex(re, im)
        scale = abs(evaluate(DEMO_SPEC, DEMO_X_STAR, k).f)
        assert symmetry_check(DEMO_SPEC, DEMO_X_STAR, k) < 1e-10 * max(1.0, scale)


class TestDerivativeFidelity:
    def test_all_slots_match_oracles(self):
        rng = random.Random(11)
        for _ in range(20):
            k = random_fourth_quadrant(rng, 0.5, 5.0)
            p = ParamPoint(rng.uniform(6.0, 18.0), rng.uniform(5.0, 12.0))
            v = evaluate(DEMO_SPEC, p, k)
            for order, got in ((1, v.df_dk), (2, v.d2f_dk2), (3, v.d3f_dk3)):
                want = oracles.cauchy_dk(DEMO_SPEC, p, k, order)
                assert abs(got - want) <= 1e-9 * max(1.0, abs(want))
            for axis in range(2):
                want = oracles.dx_of_f(DEMO_SPEC, p, k, axis)
                assert abs(v.df_dx[axis] - want) <= 1e-9 * max(1.0, abs(want))
                want = oracles.dxdk_of_f(DEMO_SPEC, p, k, axis)
                assert abs(v.d2f_dxdk[axis] - want) <= 1e-9 * max(1.0, abs(want))

    def test_width_binding_derivatives(self):
        spec = PotentialSpec(
            (Layer(1.0, 0.0), Layer(1.0, 10.0), Layer(1.5, 0.0), Layer(1.0, 10.0)),
            (Binding(2, "width"), Binding(1, "height")),
        )
        p = ParamPoint(1.5, 10.0)
        k = 2.2 - 0.3j
        v = evaluate(spec, p, k)
        for axis in range(2):
            want = oracles.dx_of_f(spec, p, k, axis, h0=0.02)
            assert abs(v.df_dx[axis] - want) <= 1e-8 * max(1.0, abs(want))
            want = oracles.dxdk_of_f(spec, p, k, axis, h0=0.02)
            assert abs(v.d2f_dxdk[axis] - want) <= 1e-8 * max(1.0, abs(want))


class TestBoundStates:
    def test_square_well_bound_states_match_bisection(self):
        kappas = oracles.square_well_bound_momenta(depth=4.0, width=1.0)
        assert kappas  # the well is deep enough to bind at least one state
        for kappa in kappas:
            v = evaluate(WELL, P0, complex(0.0, kappa))
            assert abs(v.f) < 1e-9

    def test_no_spurious_bound_state_between_roots(self):
        # |f| stays bounded away from zero between the certified roots
        kappas = oracles.square_well_bound_momenta(depth=4.0, width=1.0)
        probe = 0.5 * (kappas[0] + (kappas[1] if len(kappas) > 1 else 1.9))
        if all(abs(probe - kappa) > 1e-2 for kappa in kappas):
            assert abs(evaluate(WELL, P0, complex(0.0, probe)).f) > 1e-4
