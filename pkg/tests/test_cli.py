from __future__ import annotations

import json
import shutil

import pytest

from sitrep.cli import main


@pytest.fixture()
def workdir(tmp_path, fixtures_dir):
    for name in ("corpus.jsonl", "bias.csv", "config.yaml", "edit_pairs.jsonl", "labels.csv"):
        shutil.copy(fixtures_dir / name, tmp_path / name)
    return tmp_path


class TestBuild:
    def test_build_writes_report(self, workdir, capsys):
        out = workdir / "report.json"
        code = main(["build", "--config", str(workdir / "config.yaml"), "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["schema"] == "sitrep/1"
        assert len(report["timespans"]) >= 1
        assert any(span["chapters"] for span in report["timespans"])

    def test_build_twice_same_seed_byte_identical(self, workdir):
        out1, out2 = workdir / "r1.json", workdir / "r2.json"
        assert main(["build", "--config", str(workdir / "config.yaml"), "--out", str(out1)]) == 0
        assert main(["build", "--config", str(workdir / "config.yaml"), "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_missing_corpus_exits_2(self, workdir, caplog):
        (workdir / "corpus.jsonl").unlink()
        code = main(["build", "--config", str(workdir / "config.yaml"), "--out", str(workdir / "r.json")])
        assert code == 2
        assert "corpus.jsonl" in caplog.text

    def test_invalid_dedup_threshold_rejected_before_work(self, workdir):
        code = main(
            [
                "build",
                "--config",
                str(workdir / "config.yaml"),
                "--dedup-threshold",
                "1.5",
                "--out",
                str(workdir / "r.json"),
            ]
        )
        assert code == 2
        assert not (workdir / "r.json").exists()

    def test_dump_clusters(self, workdir):
        dump = workdir / "clusters.json"
        code = main(
            [
                "build",
                "--config",
                str(workdir / "config.yaml"),
                "--out",
                str(workdir / "r.json"),
                "--dump-clusters",
                str(dump),
            ]
        )
        assert code == 0
        clusters = json.loads(dump.read_text())
        assert clusters[0]["clusters"]

    def test_dump_stages(self, workdir):
        dumps = workdir / "stages"
        code = main(
            [
                "build",
                "--config",
                str(workdir / "config.yaml"),
                "--out",
                str(workdir / "r.json"),
                "--dump-stages",
                str(dumps),
            ]
        )
        assert code == 0
        questions = json.loads((dumps / "ts0-c0-questions.json").read_text())
        assert all(q["text"].endswith("?") for q in questions)
        contexts = json.loads((dumps / "ts0-c0-s0-contexts.json").read_text())
        assert all(0.0 <= c["validation_score"] <= 1.0 for c in contexts)
        summaries = json.loads((dumps / "ts0-c0-s0-summaries.json").read_text())
        assert set(summaries) == {"less_detailed", "normal", "more_detailed"}


class TestExportAndServe:
    def test_export_html_single_file(self, workdir):
        report = workdir / "report.json"
        main(["build", "--config", str(workdir / "config.yaml"), "--out", str(report)])
        code = main(["export", "--report", str(report), "--format", "html", "--out", str(workdir / "report.html")])
        assert code == 0
        html = (workdir / "report.html").read_text()
        assert html.startswith("<!DOCTYPE html>")
        assert "question-ts0-c0-s0" in html

    def test_export_json_roundtrip(self, workdir):
        report = workdir / "report.json"
        main(["build", "--config", str(workdir / "config.yaml"), "--out", str(report)])
        code = main(["export", "--report", str(report), "--format", "json", "--out", str(workdir / "copy.json")])
        assert code == 0
        assert json.loads((workdir / "copy.json").read_text()) == json.loads(report.read_text())


class TestEval:
    def test_eval_pairs_prints_and_writes(self, workdir, capsys):
        out = workdir / "metrics.json"
        code = main(["eval", "--pairs", str(workdir / "edit_pairs.jsonl"), "--report-out", str(out)])
        assert code == 0
        printed = capsys.readouterr().out
        assert "bleu" in printed
        metrics = json.loads(out.read_text())
        assert metrics["n_pairs"] == 3
        agg = metrics["aggregate"]
        assert agg["tokens_inserted_pct"] > agg["tokens_deleted_pct"]
        assert agg["unedited_fraction"] == pytest.approx(1 / 3)

    def test_eval_labels(self, workdir, capsys):
        code = main(["eval", "--labels", str(workdir / "labels.csv")])
        assert code == 0
        assert "incomplete" in capsys.readouterr().out

    def test_eval_without_inputs_is_usage_error(self, workdir):
        assert main(["eval"]) == 2

    def test_eval_report_citations(self, workdir, capsys):
        report = workdir / "report.json"
        main(["build", "--config", str(workdir / "config.yaml"), "--out", str(report)])
        code = main(["eval", "--report", str(report)])
        assert code == 0
        assert "coverage" in capsys.readouterr().out


class TestIngest:
    def test_ingest_normalizes(self, workdir):
        out = workdir / "normalized.jsonl"
        code = main(["ingest", "--corpus", str(workdir / "corpus.jsonl"), "--out", str(out)])
        assert code == 0
        assert out.read_text().count("\n") == 30

    def test_unknown_flag_exits_2(self, workdir):
        with pytest.raises(SystemExit) as excinfo:
            main(["ingest", "--nope"])
        assert excinfo.value.code == 2

    def test_help_available(self, capsys):
        for argv in (["--help"], ["build", "--help"], ["eval", "--help"]):
            with pytest.raises(SystemExit) as excinfo:
                main(argv)
            assert excinfo.value.code == 0
