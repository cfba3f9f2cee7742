from pathlib import Path

import pytest

from epfigures.analysis import (
    imag_projection_crosses,
    plane_projection_crosses,
    real_projection_crosses,
)
from epfigures.cli import main
from epfigures.io import FigureError, Style, load_model_json, load_trajectory
from epfigures.render import FigureRequest, render

DATA = Path(__file__).resolve().parent.parent.parent / "data" / "demo"
EP_JSON = DATA / "ep" / "ep.json"


class TestLoaders:
    def test_trajectory_columns(self):
        traj = load_trajectory(DATA / "trace2" / "trajectory.csv")
        assert len(traj.xi1) == 81
        assert traj.model_valid.all()

    def test_missing_columns_reported(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("xi1,reKn\n0,1\n")
        with pytest.raises(FigureError, match="missing columns"):
            load_trajectory(bad)

    def test_empty_csv_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        with pytest.raises(FigureError, match="empty"):
            load_trajectory(empty)

    def test_model_json_fields(self):
        model = load_model_json(EP_JSON)
        assert model.validity_radius > 0.0
        assert model.r_vec.shape == (2,)

    def test_style_file(self, tmp_path):
        cfg = tmp_path / "style.cfg"
        cfg.write_text("dpi = 72\ncolor_n = black\n# comment\n")
        style = Style.load(cfg)
        assert style.dpi == 72 and style.color_n == "black"

    def test_unknown_style_key(self, tmp_path):
        cfg = tmp_path / "style.cfg"
        cfg.write_text("glitter = yes\n")
        with pytest.raises(FigureError):
            Style.load(cfg)


class TestProjectionPatterns:
    """Which planar projections cross, per committed demo path."""

    def test_energy_cross_width_anticross_path(self):
        traj = load_trajectory(DATA / "trace1" / "trajectory.csv")
        assert real_projection_crosses(traj)
        assert not imag_projection_crosses(traj)
        assert not plane_projection_crosses(traj)

    def test_joint_degeneracy_path_crosses_everywhere(self):
        traj = load_trajectory(DATA / "trace2" / "trajectory.csv")
        assert real_projection_crosses(traj)
        assert imag_projection_crosses(traj)
        assert plane_projection_crosses(traj)

    def test_width_cross_energy_anticross_path(self):
        traj = load_trajectory(DATA / "trace3" / "trajectory.csv")
        assert not real_projection_crosses(traj)
        assert imag_projection_crosses(traj)
        assert not plane_projection_crosses(traj)


class TestRender:
    @pytest.mark.parametrize(
        "kind,source",
        [
            ("section3d", DATA / "trace2" / "trajectory.csv"),
            ("loop", DATA / "loop_enclosing" / "loop_trajectory.csv"),
            ("surfaces", EP_JSON),
        ],
    )
    def test_kinds_write_images(self, tmp_path, kind, source):
        out = tmp_path / f"{kind}.png"
        written = render(FigureRequest(kind, str(source), str(out)))
        assert written == out and out.stat().st_size > 0

    def test_unknown_kind_rejected(self):
        with pytest.raises(FigureError):
            FigureRequest("pie", "x.csv", "y.png")

    def test_empty_csv_writes_nothing(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        out = tmp_path / "fig.png"
        with pytest.raises(FigureError):
            render(FigureRequest("section3d", str(empty), str(out)))
        assert not out.exists()

    def test_deterministic_output(self, tmp_path):
        outs = []
        for name in ("a.png", "b.png"):
            out = tmp_path / name
            render(FigureRequest("loop", str(DATA / "loop_enclosing" / "loop_trajectory.csv"), str(out)))
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


class TestCli:
    def test_end_to_end(self, tmp_path, capsys):
        out = tmp_path / "fig.png"
        code = main(["section3d", str(DATA / "trace1" / "trajectory.csv"), str(out)])
        assert code == 0 and out.exists()

    def test_bad_input_fails_cleanly(self, tmp_path, capsys):
        code = main(["loop", str(tmp_path / "missing.csv"), str(tmp_path / "fig.png")])
        assert code == 1
        assert "error:" in capsys.readouterr().err
