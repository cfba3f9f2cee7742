import json
import re
from pathlib import Path

import pytest

from epdoublet.cli import main

REPO = Path(__file__).resolve().parent.parent
DEMO_CFG = str(REPO / "configs" / "double_barrier.cfg")
FREE_CFG = str(REPO / "configs" / "free.cfg")
EP_JSON = str(REPO / "data" / "demo" / "ep" / "ep.json")
GOLDEN_POLES = REPO / "data" / "demo" / "poles" / "poles.json"


def run(args):
    return main(args)


class TestPoles:
    def test_free_potential_empty_report(self, capsys):
        assert run(["poles", "--config", FREE_CFG, "--region", "0.1,5,-1,-0.001"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["count"] == 0 and doc["zeros"] == []

    def test_demo_matches_golden_file(self, capsys):
        golden = json.loads(GOLDEN_POLES.read_text())
        x1, x2 = golden["parameters"]
        region = ",".join(str(v) for v in golden["region"])
        assert run(
            ["poles", "--config", DEMO_CFG, "--x1", str(x1), "--x2", str(x2),
             "--region", region]
        ) == 0
        doc = json.loads(capsys.readouterr().out)
        key = lambda z: (z.real, z.imag)
        got = sorted((complex(a, b) for a, b in doc["zeros"]), key=key)
        want = sorted((complex(a, b) for a, b in golden["zeros"]), key=key)
        assert len(got) == len(want)
        for g, w in zip(got, want):
            assert abs(g - w) < 1e-9

    def test_malformed_config_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("nonsense = 1\n")
        assert run(["poles", "--config", str(bad), "--region", "1,2,-1,-0.1"]) == 2

    def test_bad_region_exits_2(self):
        assert run(["poles", "--config", FREE_CFG, "--region", "1,2,-1"]) == 2


class TestFindEp:
    def test_demo_grid_locates_ep(self, tmp_path, capsys):
        out = tmp_path / "ep"
        code = run(
            ["find-ep", "--config", DEMO_CFG,
             "--grid", "5,5,15.1,15.6,8.4,8.9", "--region", "4.2,4.7,-0.45,-0.02",
             "--skip-validity", "--out", str(out)]
        )
        assert code == 0
        doc = json.loads((out / "ep.json").read_text())
        assert doc["exceptional_point"]["residual"] < 1e-10
        assert (out / "manifest.json").exists()

    def test_empty_grid_exits_3(self, capsys):
        with pytest.warns(UserWarning):
            code = run(
                ["find-ep", "--config", DEMO_CFG,
                 "--grid", "3,3,2,3,2,3", "--region", "4.2,4.7,-0.45,-0.02"]
            )
        assert code == 3

    def test_reloaded_model_identical(self, capsys):
        from epdoublet.unfolding import UnfoldingModel

        text = Path(EP_JSON).read_text()
        model = UnfoldingModel.from_json(text)
        assert json.loads(model.to_json()) == json.loads(text)


class TestSection:
    def test_csv_columns_and_class(self, tmp_path, capsys):
        out = tmp_path / "sec"
        code = run(
            ["section", "--config", DEMO_CFG, "--ep", EP_JSON,
             "--xi2", "2e-3", "--range=-2e-3,6e-3", "--steps", "5",
             "--out", str(out)]
        )
        assert code == 0
        lines = (out / "section.csv").read_text().splitlines()
        assert lines[0] == "xi1,dE,dGamma,dotR,dotI,class"
        assert len(lines) == 6
        assert lines[1].endswith("EnergyCross_WidthAnticross")

    def test_out_of_validity_range_exits_4(self, capsys):
        code = run(
            ["section", "--config", DEMO_CFG, "--ep", EP_JSON,
             "--xi2", "0.2", "--range=-0.2,0.2"]
        )
        assert code == 4
        assert "indices" in capsys.readouterr().err

    def test_minimal_section_without_crossing(self, capsys):
        code = run(
            ["section", "--config", DEMO_CFG, "--ep", EP_JSON,
             "--xi2", "2e-3", "--range", "4e-3,6e-3", "--steps", "2"]
        )
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["class"] == "NoCrossing"


class TestTrace:
    def test_trajectory_csv_format(self, tmp_path, capsys):
        out = tmp_path / "tr"
        code = run(
            ["trace", "--config", DEMO_CFG, "--ep", EP_JSON,
             "--xi2", "0", "--range=-1e-3,1e-3", "--steps", "9",
             "--out", str(out)]
        )
        assert code == 0
        lines = (out / "trajectory.csv").read_text().splitlines()
        assert lines[0] == (
            "xi1,reKn,imKn,reKn1,imKn1,reEn,imEn,reEn1,imEn1,"
            "reEhatN,imEhatN,reEhatN1,imEhatN1,model_valid"
        )
        assert len(lines) == 10
        # 17 significant digits in the numeric cells
        first = lines[1].split(",")
        assert re.match(r"^-?\d\.\d{16}", first[1])
        assert first[-1] in ("0", "1")


class TestLoop:
    def test_swap_and_identity_reports(self, capsys):
        assert run(
            ["loop", "--config", DEMO_CFG, "--ep", EP_JSON,
             "--radius", "2e-3", "--steps", "48"]
        ) == 0
        assert json.loads(capsys.readouterr().out)["permutation"] == "swap"
        assert run(
            ["loop", "--config", DEMO_CFG, "--ep", EP_JSON,
             "--radius", "1e-3", "--steps", "48", "--center", "0.02,0"]
        ) == 0
        assert json.loads(capsys.readouterr().out)["permutation"] == "identity"


class TestManifest:
    def test_rerun_is_byte_identical_modulo_timestamp(self, tmp_path, capsys):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert run(
                ["section", "--config", DEMO_CFG, "--ep", EP_JSON,
                 "--xi2", "1e-3", "--range=-1e-3,1e-3", "--steps", "3",
                 "--out", str(out)]
            ) == 0
            outs.append(out)
        assert (outs[0] / "section.csv").read_bytes() == (outs[1] / "section.csv").read_bytes()
        m0 = json.loads((outs[0] / "manifest.json").read_text())
        m1 = json.loads((outs[1] / "manifest.json").read_text())
        for m in (m0, m1):
            m.pop("timestamp")
            m["parameters"].pop("out")
            m.pop("output_dir")
        assert m0 == m1

    def test_env_var_overrides_workers(self, monkeypatch, capsys):
        monkeypatch.setenv("EPOINT_THREADS", "not-a-number")
        code = run(
            ["find-ep", "--config", DEMO_CFG,
             "--grid", "2,2,15.2,15.4,8.5,8.7", "--region", "4.2,4.7,-0.45,-0.02",
             "--skip-validity"]
        )
        assert code == 2
