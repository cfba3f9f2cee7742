import textwrap

import pytest

from epdoublet.errors import ConfigError, InvalidParameterError
from epdoublet.potential import (
    Binding,
    Layer,
    ParamPoint,
    PotentialSpec,
    binding_sensitivities,
    instantiate,
    load_config,
)


def write_cfg(tmp_path, text):
    path = tmp_path / "pot.cfg"
    path.write_text(textwrap.dedent(text))
    return path


class TestLayer:
    def test_rejects_nonpositive_width(self):
        with pytest.raises(InvalidParameterError):
            Layer(0.0, 1.0)
        with pytest.raises(InvalidParameterError):
            Layer(-1.0, 1.0)

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidParameterError):
            Layer(float("nan"), 1.0)
        with pytest.raises(InvalidParameterError):
            Layer(1.0, float("inf"))


class TestPotentialSpec:
    def test_empty_layers_is_free(self):
        spec = PotentialSpec(())
        assert spec.total_radius == 0.0
        assert instantiate(spec, ParamPoint(0.0, 0.0)) == []

    def test_binding_out_of_range(self):
        with pytest.raises(ConfigError):
            PotentialSpec((Layer(1, 1),), (Binding(3, "height"),))

    def test_duplicate_binding_slots(self):
        with pytest.raises(ConfigError):
            PotentialSpec(
                (Layer(1, 1),), (Binding(0, "height"), Binding(0, "height"))
            )

    def test_instantiate_overrides_bound_slots(self):
        spec = PotentialSpec(
            (Layer(1, 5), Layer(2, 0)),
            (Binding(0, "height"), Binding(1, "width")),
        )
        layers = instantiate(spec, ParamPoint(7.5, 3.0))
        assert layers == [Layer(1, 7.5), Layer(3.0, 0)]

    def test_instantiate_rejects_nonpositive_bound_width(self):
        spec = PotentialSpec((Layer(1, 5),), (Binding(0, "width"),))
        with pytest.raises(InvalidParameterError, match="layer 0"):
            instantiate(spec, ParamPoint(-0.5, 0.0))

    def test_instantiate_is_deterministic(self):
        spec = PotentialSpec((Layer(1, 5),), (Binding(0, "height"),))
        p = ParamPoint(2.5, 0.0)
        assert instantiate(spec, p) == instantiate(spec, p)

    def test_sensitivities_mark_bound_slots(self):
        spec = PotentialSpec(
            (Layer(1, 5), Layer(2, 0)),
            (Binding(0, "height"), Binding(1, "width")),
        )
        assert binding_sensitivities(spec) == [(0, 1, 0, 0), (0, 0, 1, 0)]


class TestLoadConfig:
    def test_round_trip(self, tmp_path):
        path = write_cfg(
            tmp_path,
            """\
            # demo
            name = twobar
            layer = 1.0 0.0
            layer = 1.0 8.0
            x1 = layer[1].height
            """,
        )
        spec = load_config(path)
        assert spec.name == "twobar"
        assert spec.layers == (Layer(1, 0), Layer(1, 8))
        assert spec.bindings == (Binding(1, "height"),)

    def test_unknown_key_rejected(self, tmp_path):
        path = write_cfg(tmp_path, "color = red\n")
        with pytest.raises(ConfigError, match="unknown key"):
            load_config(path)

    def test_malformed_layer_rejected(self, tmp_path):
        path = write_cfg(tmp_path, "layer = 1.0\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_bad_binding_rejected(self, tmp_path):
        path = write_cfg(tmp_path, "layer = 1 1\nx1 = layer[0].depth\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_x2_without_x1_rejected(self, tmp_path):
        path = write_cfg(tmp_path, "layer = 1 1\nx2 = layer[0].height\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.cfg")
