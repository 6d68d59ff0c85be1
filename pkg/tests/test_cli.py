import json
import math
from pathlib import Path

import pytest

from glpot.cli import main, parse_form_spec, parse_grid_spec
from glpot.errors import DomainError
from glpot.experiments import ExperimentConfig, run_experiment


class TestSpecParsers:
    def test_form_specs(self):
        assert parse_form_spec("g_delta:0").kind == "g_delta"
        assert parse_form_spec("f_delta:0.5,1").alpha == 0.5
        assert parse_form_spec("indicator:0,1").interval == (0.0, 1.0)
        assert parse_form_spec("big_r:0.5,0,1").slow is not None
        with pytest.raises(DomainError):
            parse_form_spec("g_delta:0,1")
        with pytest.raises(DomainError):
            parse_form_spec("unknown:1")

    def test_grid_specs(self):
        g = parse_grid_spec("geometric:2.1:1000:8")
        assert len(g.points) == 8 and g.points[0] == pytest.approx(2.1)
        u = parse_grid_spec("uniform:0:1:5")
        assert u.points == (0.0, 0.25, 0.5, 0.75, 1.0)
        with pytest.raises(DomainError):
            parse_grid_spec("geometric:1:2")
        with pytest.raises(DomainError):
            parse_grid_spec("spiral:1:2:3")


class TestCliCommands:
    def test_usage_error_exit_code(self):
        assert main(["frobnicate"]) == 2

    def test_validation_error_exit_code(self):
        assert main(["lpnorm", "--form", "unknown:1", "--p", "2"]) == 2

    def test_numeric_error_exit_code(self):
        # divergent integral: f_delta at p = 2 with alpha = 1/2
        assert main(["lpnorm", "--form", "f_delta:0.5,0", "--p", "2"]) == 3

    def test_lpnorm_value(self, capsys):
        assert main(["lpnorm", "--form", "g_delta:0", "--p", "2"]) == 0
        out = capsys.readouterr().out
        assert "0.6065306" in out

    def test_transform_csv(self, capsys):
        code = main(
            [
                "transform",
                "--psi",
                "power:a=1,b=2,beta=1,gamma=1",
                "--kind",
                "riesz_zeta",
                "--alpha",
                "0.5",
                "--d",
                "1",
                "--qgrid",
                "geometric:2.1:1000:16",
            ]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "q,value"
        assert len(lines) == 17

    def test_transform_constant_weight_value(self, capsys):
        main(
            [
                "transform",
                "--psi",
                "const:a=1,b=2",
                "--kind",
                "riesz_zeta",
                "--alpha",
                "0.5",
                "--qgrid",
                "uniform:4:4.5:2",
            ]
        )
        first = capsys.readouterr().out.strip().splitlines()[1]
        q, value = first.split(",")
        assert float(q) == 4.0
        assert float(value) == pytest.approx(math.sqrt(8.0), rel=1e-12)

    def test_potential_csv(self, capsys):
        code = main(
            ["potential", "--form", "indicator:0,1", "--kernel", "riesz:0.5", "--grid", "uniform:0:1:3"]
        )
        assert code == 0
        rows = capsys.readouterr().out.strip().splitlines()
        x0 = rows[1].split(",")
        assert float(x0[1]) == pytest.approx(2.0, rel=1e-9)

    def test_grand_report(self, capsys):
        code = main(["grand", "--form", "g_delta:0", "--psi", "const:a=1.2,b=1.8"])
        assert code == 0
        assert "value=" in capsys.readouterr().out

    def test_vfun(self, capsys):
        code = main(["vfun", "--form", "g_delta:0", "--alpha", "0.5", "--p", "1.4"])
        assert code == 0
        rows = capsys.readouterr().out.strip().splitlines()
        assert rows[0] == "form,p,q,V"
        assert float(rows[1].split(",")[3]) > 0.0

    def test_catalog(self, capsys):
        assert main(["catalog"]) == 0
        assert "g_delta" in capsys.readouterr().out


class TestVerify:
    def test_e8_files_and_exit(self, tmp_path, capsys):
        code = main(["verify", "E8_bessel_sanity", "--out", str(tmp_path)])
        assert code == 0
        assert "E8_bessel_sanity: PASS" in capsys.readouterr().out
        for suffix in (".csv", ".summary.txt", ".plot"):
            assert (tmp_path / f"E8_bessel_sanity{suffix}").exists()
        summary = (tmp_path / "E8_bessel_sanity.summary.txt").read_text()
        assert "PASS=true" in summary

    def test_config_round_trip(self, tmp_path):
        cfg_path = tmp_path / "e5.json"
        cfg_path.write_text(json.dumps({"name": "E5_orlicz_growth_eq37", "gamma": 1.0}))
        code = main(["verify", "E5_orlicz_growth_eq37", "--config", str(cfg_path), "--out", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "E5_orlicz_growth_eq37.csv").exists()

    def test_unknown_config_key_rejected(self, tmp_path):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text(json.dumps({"name": "E5_orlicz_growth_eq37", "typo_key": 1}))
        assert main(["verify", "E5_orlicz_growth_eq37", "--config", str(cfg_path)]) == 2

    def test_config_name_mismatch(self, tmp_path):
        cfg_path = tmp_path / "e5.json"
        cfg_path.write_text(json.dumps({"name": "E5_orlicz_growth_eq37"}))
        assert main(["verify", "E4_truncated_thm6", "--config", str(cfg_path)]) == 2

    def test_determinism_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "run1", tmp_path / "run2"
        for out in (out1, out2):
            assert main(["verify", "E5_orlicz_growth_eq37", "--out", str(out)]) == 0
        a = (out1 / "E5_orlicz_growth_eq37.csv").read_bytes()
        b = (out2 / "E5_orlicz_growth_eq37.csv").read_bytes()
        assert a == b


class TestExperimentConfig:
    def test_defaults(self):
        cfg = ExperimentConfig(name="E8_bessel_sanity")
        assert cfg.quad.rel_tol == 1e-8

    def test_from_dict_strict(self):
        with pytest.raises(DomainError):
            ExperimentConfig.from_dict({"name": "E8_bessel_sanity", "alpha": 0.5})
        cfg = ExperimentConfig.from_dict({"name": "E6_maximal_domination", "alpha": 0.4, "seed": 3})
        assert cfg.alpha == 0.4 and cfg.seed == 3
        with pytest.raises(DomainError):
            ExperimentConfig.from_dict({"alpha": 0.5})
        with pytest.raises(DomainError):
            ExperimentConfig.from_dict({"name": "E99"})

    def test_partial_marker_on_numeric_failure(self, tmp_path):
        # force a numeric failure through an out-of-range gamma for f_zero
        cfg = ExperimentConfig(name="E4_truncated_thm6", gamma=0.1, output_dir=str(tmp_path))
        with pytest.raises(Exception):
            run_experiment(cfg)
        assert (tmp_path / "E4_truncated_thm6.partial").exists()
