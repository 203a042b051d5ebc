import subprocess
import sys
from pathlib import Path

import pytest

from topicflow.cli import _parse_k_list, main
from topicflow.templates import figure1_workflow, sample_corpus_path
from topicflow.workflow import Edge, serialize


def write_workflow(path: Path, workflow) -> Path:
    path.write_bytes(serialize(workflow))
    return path


class TestKListParsing:
    def test_comma_and_range_forms(self):
        assert _parse_k_list("2,3,4") == [2, 3, 4]
        assert _parse_k_list("2..5") == [2, 3, 4, 5]
        assert _parse_k_list("2..4,7") == [2, 3, 4, 7]

    def test_rejects_duplicates_and_nonpositive(self):
        with pytest.raises(ValueError):
            _parse_k_list("2,2")
        with pytest.raises(ValueError):
            _parse_k_list("0,1")


class TestRunCommand:
    def test_happy_path_exit_zero(self, tmp_path, capsys):
        wf = write_workflow(tmp_path / "f.workflow.json", figure1_workflow(iterations=20))
        code = main(["run", str(wf), "--seed", "42", "--out", str(tmp_path / "out")])
        assert code == 0
        assert (tmp_path / "out" / "manifest.json").is_file()
        assert "workflow_hash" in capsys.readouterr().out

    def test_cycle_exits_one_with_diagnostic(self, tmp_path, capsys):
        workflow = figure1_workflow(iterations=5)
        workflow.edges.append(Edge("lda", "model", "lda", "dictionary"))
        wf = write_workflow(tmp_path / "bad.workflow.json", workflow)
        code = main(["run", str(wf), "--out", str(tmp_path / "out")])
        assert code == 1
        assert "cycle" in capsys.readouterr().err

    def test_missing_corpus_exits_two(self, tmp_path, capsys):
        workflow = figure1_workflow(corpus_path="/nonexistent/docs.csv", iterations=5)
        wf = write_workflow(tmp_path / "f.workflow.json", workflow)
        code = main(["run", str(wf), "--out", str(tmp_path / "out")])
        assert code == 2
        assert "failed" in capsys.readouterr().err

    def test_corpus_override(self, tmp_path):
        workflow = figure1_workflow(corpus_path="/nonexistent/docs.csv", iterations=10)
        wf = write_workflow(tmp_path / "f.workflow.json", workflow)
        code = main(
            [
                "run", str(wf),
                "--corpus", f"docs={sample_corpus_path()}",
                "--out", str(tmp_path / "out"),
            ]
        )
        assert code == 0


class TestValidateCommand:
    def test_clean_template(self, tmp_path, capsys):
        wf = write_workflow(tmp_path / "f.workflow.json", figure1_workflow())
        assert main(["validate", str(wf)]) == 0
        assert capsys.readouterr().out.strip() == "ok"

    def test_malformed_file(self, tmp_path, capsys):
        path = tmp_path / "junk.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["validate", str(path)]) == 1


class TestSweepCommand:
    def test_single_k_row(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code = main(
            ["sweep", "--k-list", "5", "--iterations", "20", "--seed", "3", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "K,coherence_mean,perplexity,seed"
        assert len(lines) == 2
        assert lines[1].startswith("5,")

    def test_row_count_matches_k_list(self, tmp_path, capsys):
        code = main(["sweep", "--k-list", "2,3,4", "--iterations", "15", "--seed", "3"])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 4  # header + 3 rows

    def test_table_matches_direct_composition(self, tmp_path, capsys):
        from topicflow import corpus as corpus_mod
        from topicflow import textprep
        from topicflow.evaluation import coherence_sweep
        from topicflow.lda import LdaConfig
        from topicflow.templates import default_stopwords_path

        code = main(["sweep", "--k-list", "2,3", "--iterations", "15", "--seed", "9"])
        assert code == 0
        printed = capsys.readouterr().out

        docs = textprep.load_documents(sample_corpus_path(), format="delimited")
        stopwords = textprep.load_stopwords(default_stopwords_path())
        tokenized = textprep.tokenize_all(docs, stopwords)
        dictionary = corpus_mod.build_dictionary(tokenized)
        bow = corpus_mod.build_corpus(tokenized, dictionary)
        expected = coherence_sweep(
            bow, dictionary, tokenized, [2, 3],
            LdaConfig(num_topics=3, iterations=15, seed=9),
        )
        assert printed == expected.to_csv()

    def test_bad_k_list(self, capsys):
        assert main(["sweep", "--k-list", "2,2"]) == 1


class TestConsoleScript:
    def test_version_flag(self):
        result = subprocess.run(
            [sys.executable, "-m", "topicflow.cli", "--version"],
            capture_output=True, text=True,
        )
        assert result.returncode == 0
        assert result.stdout.strip() == "topicflow 0.1.0"
