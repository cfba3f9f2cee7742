import math

import numpy as np
import pytest

from epdoublet.demo import DEMO_SPEC, demo_model
from epdoublet.errors import ContinuationError, IsolationLostError
from epdoublet.tracer import PathSpec, loop, trace
from epdoublet.unfolding import OffsetVector


@pytest.fixture(scope="module")
def model():
    return demo_model()


def pointset_mismatch(rec_a, rec_b):
    direct = abs(rec_a.k_n - rec_b.k_n) + abs(rec_a.k_m - rec_b.k_m)
    crossed = abs(rec_a.k_n - rec_b.k_m) + abs(rec_a.k_m - rec_b.k_n)
    return min(direct, crossed)


class TestPathSpec:
    def test_uniform_sampling(self):
        path = PathSpec(1e-3, -2e-3, 2e-3, 5)
        xs = [xi.xi1 for xi in path.sample()]
        assert np.allclose(xs, np.linspace(-2e-3, 2e-3, 5))
        assert all(xi.xi2 == 1e-3 for xi in path.sample())

    def test_needs_two_steps(self):
        with pytest.raises(ValueError):
            PathSpec(0.0, 0.0, 1.0, 1)


class TestTrace:
    def test_model_and_exact_stay_close_inside_validity(self, model):
        tr = trace(DEMO_SPEC, model, PathSpec(1e-3, -2e-3, 2e-3, 21))
        for r in tr.records:
            assert r.model_valid
            # compare as unordered pairs: exact labels follow continuity while
            # model labels follow the larger real part, which may differ
            direct = max(abs(r.energy_n - r.model_e_n), abs(r.energy_m - r.model_e_m))
            crossed = max(abs(r.energy_n - r.model_e_m), abs(r.energy_m - r.model_e_n))
            assert min(direct, crossed) < 200.0 * r.xi.norm ** 1.5

    def test_model_columns_flagged_outside_validity(self, model):
        m = demo_model(validity_radius=1.5e-3)
        tr = trace(DEMO_SPEC, m, PathSpec(0.0, -2e-3, 2e-3, 9))
        valid = [r.model_valid for r in tr.records]
        assert not valid[0] and not valid[-1]
        assert any(valid)
        for r in tr.records:
            if not r.model_valid:
                assert math.isnan(r.model_e_n.real)

    def test_reversed_path_gives_same_point_sets(self, model):
        fwd = trace(DEMO_SPEC, model, PathSpec(0.0, -1e-3, 1e-3, 21))
        bwd = trace(DEMO_SPEC, model, PathSpec(0.0, 1e-3, -1e-3, 21))
        for a, b in zip(fwd.records, reversed(bwd.records)):
            assert pointset_mismatch(a, b) < 1e-10

    def test_step_refinement_does_not_move_poles(self, model):
        coarse = trace(DEMO_SPEC, model, PathSpec(1e-3, -2e-3, 2e-3, 11))
        fine = trace(DEMO_SPEC, model, PathSpec(1e-3, -2e-3, 2e-3, 21))
        for a, b in zip(coarse.records, fine.records[::2]):
            assert pointset_mismatch(a, b) < 1e-10

    def test_through_ep_has_double_record(self, model):
        tr = trace(DEMO_SPEC, model, PathSpec(0.0, -1e-3, 1e-3, 41))
        mid = min(tr.records, key=lambda r: abs(r.xi1))
        assert mid.k_n == mid.k_m

    def test_undersampled_fast_segment_raises(self, model):
        # a path that jumps from one side of the window to the other in one
        # step after many tiny steps must trip the continuity guard
        offsets = [OffsetVector(x, 1e-3) for x in np.linspace(0.0, 1e-4, 20)]
        offsets.append(OffsetVector(0.04, 1e-3))
        from epdoublet.tracer import _trace_offsets

        with pytest.raises((ContinuationError, IsolationLostError)):
            _trace_offsets(DEMO_SPEC, model, offsets, 1e-12)


class TestLoop:
    def test_enclosing_loop_swaps(self, model):
        assert loop(DEMO_SPEC, model, 2e-3, steps=64).swapped

    def test_distant_loop_is_identity(self, model):
        tr = loop(DEMO_SPEC, model, 1e-3, steps=64, center=OffsetVector(0.01, 0.0))
        assert not tr.swapped

    def test_double_loop_restores_identity(self, model):
        assert not loop(DEMO_SPEC, model, 2e-3, steps=64, turns=2).swapped

    def test_closed_loop_endpoints_coincide_as_sets(self, model):
        tr = loop(DEMO_SPEC, model, 2e-3, steps=64)
        assert pointset_mismatch(tr.records[0], tr.records[-1]) < 1e-9

    def test_parameter_validation(self, model):
        with pytest.raises(ValueError):
            loop(DEMO_SPEC, model, -1.0)
        with pytest.raises(ValueError):
            loop(DEMO_SPEC, model, 1e-3, steps=4)
        with pytest.raises(ValueError):
            loop(DEMO_SPEC, model, 1e-3, turns=0)
