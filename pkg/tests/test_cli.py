import logging
import os

import numpy as np
import pytest

from Controller import BaseController, ExitCode, NoiseSweepController
from Controller.detect_controller import TIMING_KEYS, read_summary
from Core.graph import build_laplacians, import_triplets
from Core.Repository import parse_config
from Core.video import DataMatrix, read_matrix, write_masks, write_matrix
from dgmotion import main
from Utils.Exceptions import MetricsException, SolverDivergenceException


def _tree(directory):
    """目录下全部文件的相对路径到内容的映射；summary.txt 去掉耗时行。"""
    files = {}
    for root, _, names in os.walk(directory):
        for name in names:
            full = os.path.join(root, name)
            with open(full, "rb") as f:
                content = f.read()
            if name == "summary.txt":
                timing = tuple(f"{key}=".encode() for key in TIMING_KEYS)
                content = b"".join(line for line in content.splitlines(keepends=True)
                                   if not line.startswith(timing))
            files[os.path.relpath(full, directory)] = content
    return files


def test_synth_writes_frames_masks_and_background(tmp_path):
    out = tmp_path / "synth"
    assert main(["synth", "--output", str(out)]) == 0
    assert len(os.listdir(out / "frames")) == 30
    assert len(os.listdir(out / "masks")) == 30
    assert (out / "background.pgm").is_file()
    assert read_matrix(str(out / "video.dgm")).shape == (40, 50, 30)


def test_synth_is_reproducible_and_noise_changes_frames(tmp_path, small_spec_file):
    first, second, noisy = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    assert main(["synth", small_spec_file, "--seed", "3", "--output", str(first)]) == 0
    assert main(["synth", small_spec_file, "--seed", "3", "--output", str(second)]) == 0
    assert _tree(first) == _tree(second)
    assert main(["synth", small_spec_file, "--seed", "3", "--output", str(noisy),
                 "--set", "noise_sigma=0.001"]) == 0
    assert (first / "video.dgm").read_bytes() != (noisy / "video.dgm").read_bytes()
    assert _tree(first / "masks") == _tree(noisy / "masks")


def test_synth_rejects_invalid_spec(tmp_path):
    spec = tmp_path / "bad.spec"
    spec.write_text("height = 10\nwidth = 10\nobject_intensity = 3\n", encoding="utf-8")
    assert main(["synth", str(spec), "--output", str(tmp_path / "out")]) == 2


def test_detect_writes_all_artifacts(tmp_path, small_spec_file):
    out = tmp_path / "run"
    assert main(["detect", "--synthetic", small_spec_file, "--output", str(out)]) in (0, 1)
    for name in ("L.dgm", "S.dgm", "background.pgm", "kept-frames.txt", "progress.log",
                 "resolved-config.txt", "summary.txt"):
        assert (out / name).is_file(), name
    assert len(os.listdir(out / "masks")) == 8
    assert read_matrix(str(out / "L.dgm")).shape == (16, 20, 8)
    assert "converged=" in (out / "summary.txt").read_text(encoding="utf-8")
    progress = (out / "progress.log").read_text(encoding="utf-8").splitlines()
    assert progress[0].startswith("iteration=1 objective=")
    assert progress[-1].startswith("converged=")


def test_detect_rerun_from_resolved_config_is_bit_exact(tmp_path, small_spec_file):
    first, second = tmp_path / "first", tmp_path / "second"
    code = main(["detect", "--synthetic", small_spec_file, "--output", str(first),
                 "--set", "max_outer=15"])
    assert code in (0, 1)
    rerun = main(["detect", "--config", str(first / "resolved-config.txt"), "--output", str(second)])
    assert rerun == code
    assert _tree(first) == _tree(second)


def test_detect_dry_run_writes_nothing(tmp_path, small_spec_file):
    out = tmp_path / "dry"
    assert main(["detect", "--synthetic", small_spec_file, "--output", str(out), "--dry-run"]) == 0
    assert not out.exists()


def test_detect_reports_missing_input(tmp_path, caplog):
    missing = str(tmp_path / "nowhere")
    with caplog.at_level(logging.ERROR):
        code = main(["detect", "--input-frames", missing, "--output", str(tmp_path / "out")])
    assert code == 2
    assert missing in caplog.text


def test_detect_requires_one_input(tmp_path):
    assert main(["detect", "--output", str(tmp_path / "out")]) == 2


def test_eval_of_exact_estimate(tmp_path, capsys):
    out = tmp_path / "run"
    out.mkdir()
    background = np.array([[0.25, 0.5, 0.125], [0.75, 0.375, 1.0]])
    masks = np.zeros((4, 2, 3), dtype=bool)
    masks[:, 1, 2] = True
    masks[2, 0, 0] = True
    write_matrix(str(out / "L.dgm"), DataMatrix(np.tile(background.reshape(-1, 1, order="F"), (1, 4)),
                                                (2, 3, 4)))
    foreground = np.stack([np.where(mask, 0.6, 0.0).reshape(-1, order="F") for mask in masks], axis=1)
    write_matrix(str(out / "S.dgm"), DataMatrix(foreground, (2, 3, 4)))
    write_masks(str(tmp_path / "truth"), masks)

    code = main(["eval", "--input-matrix", str(out / "L.dgm"), "--output", str(out),
                 "--set", f"truth_background={out / 'L.dgm'}", "--set", f"truth_masks={tmp_path / 'truth'}"])
    assert code == 0
    printed = capsys.readouterr().out
    assert "re=0.0\n" in printed
    assert "psnr=99.0\n" in printed
    assert "f_measure=1.0\n" in printed
    assert (out / "eval-report.txt").read_text(encoding="utf-8") == printed
    assert (out / "eval-report.csv").read_text(encoding="utf-8").startswith("re,psnr,")


def test_eval_with_missing_truth_file(tmp_path):
    out = tmp_path / "run"
    out.mkdir()
    matrix = DataMatrix(np.full((4, 2), 0.5), (2, 2, 2))
    write_matrix(str(out / "L.dgm"), matrix)
    write_matrix(str(out / "S.dgm"), matrix)
    code = main(["eval", "--input-matrix", str(out / "L.dgm"), "--output", str(out),
                 "--set", f"truth_masks={tmp_path / 'no-masks'}"])
    assert code == 2


def test_eval_after_detect_regenerates_synthetic_truth(tmp_path, small_spec_file, capsys):
    out = tmp_path / "run"
    assert main(["detect", "--synthetic", small_spec_file, "--output", str(out)]) in (0, 1)
    capsys.readouterr()
    assert main(["eval", "--synthetic", small_spec_file, "--output", str(out)]) == 0
    report = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    for key in ("re", "psnr", "precision", "recall", "f_measure"):
        assert report[key] != "", key
    summary = read_summary(str(out / "summary.txt"))
    assert float(summary["wall_time"]) > 0
    assert report["runtime"] == summary["wall_time"]


def test_graph_info_on_constant_video(tmp_path, capsys):
    source = tmp_path / "constant.dgm"
    matrix = DataMatrix(np.full((16, 5), 0.5), (4, 4, 5))
    write_matrix(str(source), matrix)
    out = tmp_path / "graphs"
    code = main(["graph-info", "--input-matrix", str(source), "--output", str(out),
                 "--set", "export_triplets=true"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    summaries = [dict(token.split("=", 1) for token in line.split()) for line in lines]
    assert [s["name"] for s in summaries] == ["phi_s", "phi_t"]
    assert summaries[0]["dimension"] == "16"
    assert summaries[1]["dimension"] == "5"
    for summary in summaries:
        assert summary["min_similarity"] == summary["max_similarity"] == "1.0"

    phi_s, phi_t = build_laplacians(matrix, parse_config().graph_params())
    assert (import_triplets(str(out / "phi_s.dgl")) != phi_s.matrix).nnz == 0
    assert (import_triplets(str(out / "phi_t.dgl")) != phi_t.matrix).nnz == 0


def test_bad_config_key_exits_with_input_error(tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("colour = red\n", encoding="utf-8")
    assert main(["detect", "--config", str(config), "--synthetic", "default"]) == 2
    assert main(["detect", "--set", "bogus=1", "--synthetic", "default"]) == 2


def test_noise_sweep_writes_csv(tmp_path, small_spec_file, capsys):
    out = tmp_path / "sweep"
    code = main(["noise-sweep", "--synthetic", small_spec_file, "--output", str(out), "--levels", "0.001",
                 "--set", "max_outer=10"])
    assert code == 0
    lines = (out / "noise-sweep.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0].split(",")[:3] == ["sigma", "psnr_full", "psnr_baseline"]
    assert len(lines) == 2
    assert lines[1].startswith("0.001,")
    assert capsys.readouterr().out.splitlines() == lines


def test_noise_sweep_rejects_negative_levels(tmp_path, small_spec_file):
    assert main(["noise-sweep", "--synthetic", small_spec_file, "--output", str(tmp_path),
                 "--levels", "-0.1"]) == 2


class _Scripted(BaseController):
    def __init__(self, outcome):
        super().__init__(parse_config())
        self.outcome = outcome

    def run(self):
        if isinstance(self.outcome, BaseException):
            raise self.outcome
        return self.outcome


@pytest.mark.parametrize("outcome, expected", [
    (ExitCode.SUCCESS, 0),
    (ExitCode.NOT_CONVERGED, 1),
    (SolverDivergenceException("diverged"), 2),
    (MetricsException("bad threshold"), 2),
    (PermissionError("denied"), 2),
    (RuntimeError("boom"), 2),
])
def test_controller_exit_codes(outcome, expected):
    assert _Scripted(outcome).execute() == expected


def test_eval_without_summary_leaves_runtime_empty(tmp_path, capsys):
    out = tmp_path / "run"
    out.mkdir()
    matrix = DataMatrix(np.full((4, 2), 0.5), (2, 2, 2))
    write_matrix(str(out / "L.dgm"), matrix)
    write_matrix(str(out / "S.dgm"), DataMatrix(np.zeros((4, 2)), (2, 2, 2)))
    code = main(["eval", "--input-matrix", str(out / "L.dgm"), "--output", str(out),
                 "--set", f"truth_background={out / 'L.dgm'}"])
    assert code == 0
    assert "runtime=\n" in capsys.readouterr().out


@pytest.mark.slow
def test_graph_regularization_raises_background_psnr_under_noise():
    config = parse_config(overrides={"input_synthetic": "default"})
    records = NoiseSweepController(config, levels=(0.0005, 0.001, 0.0025)).sweep()
    assert [record["sigma"] for record in records] == [0.0005, 0.001, 0.0025]
    gaps = [record["psnr_full"] - record["psnr_baseline"] for record in records]
    assert min(gaps) >= 0.0
    assert sum(gaps) / len(gaps) >= 0.5
