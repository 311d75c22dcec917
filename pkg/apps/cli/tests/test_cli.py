import io
import json
from unittest.mock import patch

from apps.backends.tests.fakes import FakeModelSession, reverse_words
from apps.cli.runner import run_cli
from apps.core.jsonio import write_json
from apps.corpus.io import save_dataset
from apps.corpus.tests.factories import parallel_dataset, sa_dataset
from apps.pipeline.checkpoints import load_decisions, save_roundtrip_records
from apps.pipeline.records import RoundTripRecord
from apps.pipeline.tests.fixtures import PipelineTestCase, uniform_reviews

OUTPUT_FILES = (
    "synthetic.pairs.jsonl",
    "synthetic.ita_Latn.jsonl",
    "synthetic.lld_Latn.jsonl",
    "report.json",
)


class CliTestCase(PipelineTestCase):
    def cli(self, *argv):
        stdout, stderr = io.StringIO(), io.StringIO()
        code = run_cli([str(arg) for arg in argv], stdout=stdout, stderr=stderr)
        return code, stdout.getvalue(), stderr.getvalue()

    def cli_json(self, *argv):
        code, out, err = self.cli(*argv)
        self.assertEqual(code, 0, err)
        return json.loads(out)


class TestDispatch(CliTestCase):
    def test_unknown_subcommand(self):
        code, out, err = self.cli("translate-all")
        self.assertEqual(code, 1)
        self.assertEqual(out, "")
        self.assertIn("usage: corpusforge <subcommand>", err)
        self.assertIn("filter-sim", err)

    def test_no_subcommand(self):
        code, out, err = self.cli()
        self.assertEqual(code, 1)
        self.assertIn("usage:", err)

    def test_unknown_flag(self):
        code, out, err = self.cli("stats", "--kind", "sa", "--colour")
        self.assertEqual(code, 1)
        self.assertEqual(out, "")
        self.assertIn("usage:", err)
        self.assertIn("--colour", err)

    def test_missing_required_value(self):
        code, _, err = self.cli("stats", "--kind", "sa")
        self.assertEqual(code, 1)
        self.assertIn("--in is required", err)


class TestStats(CliTestCase):
    def test_corpus_stats(self):
        dataset = sa_dataset(4, label=0)
        save_dataset(dataset, self.dir / "sa.jsonl")
        report = self.cli_json("stats", "--in", self.dir / "sa.jsonl", "--kind", "sa")
        self.assertEqual(report["entries"], 4)
        self.assertEqual(report["positive_label_count"], 4)

    def test_paired_stats(self):
        dataset = sa_dataset(3)
        save_dataset(dataset, self.dir / "ita.jsonl")
        save_dataset(dataset, self.dir / "lld.jsonl")
        report = self.cli_json(
            "stats",
            "--in",
            self.dir / "ita.jsonl",
            "--kind",
            "sa",
            "--paired",
            self.dir / "lld.jsonl",
        )
        self.assertEqual(list(report), ["ita_Latn", "lld_Latn"])
        self.assertEqual(report["ita_Latn"], report["lld_Latn"])

    def test_malformed_file_is_a_data_error(self):
        (self.dir / "bad.jsonl").write_text('{"text": "x"}\n', encoding="utf-8")
        bad = self.dir / "bad.jsonl"
        code, out, err = self.cli("stats", "--in", bad, "--kind", "sa")
        self.assertEqual(code, 3)
        self.assertEqual(out, "")
        self.assertIn("line 1", err)


class TestPipelineCommands(CliTestCase):
    def read_outputs(self, directory):
        return {name: (directory / name).read_bytes() for name in OUTPUT_FILES}

    def test_dry_run_never_touches_the_network(self):
        config = self.write_config(uniform_reviews(3))
        with patch("requests.Session") as session_class:
            session_class.return_value.post.side_effect = AssertionError("network")
            steps = self.cli_json("pipeline", "--config", config, "--dry-run")
        session_class.assert_not_called()
        self.assertEqual(steps[-1]["stage"], "filter_rt")
        self.assertEqual(steps[1]["url"], "http://mt.test/translate")
        self.assertFalse((self.dir / "out").exists())

    def test_stage_dry_run_stops_at_the_stage(self):
        config = self.write_config(uniform_reviews(3))
        steps = self.cli_json("filter-sim", "--config", config, "--dry-run")
        self.assertEqual(
            [step["stage"] for step in steps], ["preprocess", "translate", "filter_sim"]
        )

    def test_stages_one_by_one_match_a_single_run(self):
        config = self.write_config(uniform_reviews(20))
        stages = self.dir / "stages"
        with patch("requests.Session", return_value=FakeModelSession(reverse_words)):
            for step in ("preprocess", "translate", "filter-sim", "backtranslate"):
                summary = self.cli_json(step, "--config", config, "--out", stages)
                self.assertEqual(summary["entries"], 20)
            self.assertFalse((stages / "report.json").exists())
            self.cli_json("filter-rt", "--config", config, "--out", stages)

            whole = self.dir / "whole"
            result = self.cli_json("pipeline", "--config", config, "--out", whole)
        self.assertEqual(result["stage_counts"]["after_filter2"], 20)
        self.assertEqual(self.read_outputs(stages), self.read_outputs(whole))

    def test_backend_failure_exit_code(self):
        config = self.write_config(uniform_reviews(4))
        session = FakeModelSession(reverse_words, failures={"/translate": [400]})
        with patch("requests.Session", return_value=session):
            code, out, err = self.cli("translate", "--config", config)
        self.assertEqual(code, 2)
        self.assertEqual(out, "")
        self.assertIn("stage 'translate' failed", err)

    def test_invalid_config_exit_code(self):
        config = self.write_config(uniform_reviews(2), translate={"endpoint": "gpt"})
        code, _, err = self.cli("pipeline", "--config", config, "--dry-run")
        self.assertEqual(code, 1)
        self.assertIn("gpt", err)

    def test_standalone_preprocess(self):
        dataset = uniform_reviews(4)
        save_dataset(dataset, self.dir / "in.jsonl")
        out = self.dir / "kept.jsonl"
        summary = self.cli_json(
            "preprocess", "--in", self.dir / "in.jsonl", "--kind", "sa", "--out", out
        )
        self.assertEqual(summary["entries"], 4)
        self.assertEqual(summary["length_cutoff"], 6)
        self.assertTrue(out.is_file())

    def test_standalone_roundtrip_filter(self):
        scores = ((10.0, 0.25), (20.0, 0.5), (30.0, 0.75))
        records = [
            RoundTripRecord(str(n), "a b", "b a", "a b", bleu, meteor)
            for n, (bleu, meteor) in enumerate(scores)
        ]
        save_roundtrip_records(self.dir / "records.jsonl", records)
        out = self.dir / "rt"
        summary = self.cli_json(
            "filter-rt",
            "--in",
            self.dir / "records.jsonl",
            "--mode",
            "data_mean",
            "--out",
            out,
        )
        self.assertEqual(summary["entries"], 2)
        self.assertEqual(
            summary["thresholds"],
            {"mode": "data_mean", "bleu": 20.0, "meteor-exact": 0.5},
        )
        decisions = load_decisions(out / "filter_rt.decisions.jsonl")
        self.assertEqual([d.passed for d in decisions], [False, True, True])
        self.assertTrue((out / "thresholds.json").is_file())


class TestEvaluationCommands(CliTestCase):
    def test_eval_mt_table(self):
        corpus = parallel_dataset(3)
        save_dataset(corpus, self.dir / "t1.jsonl")
        write_json(
            self.dir / "suite.json",
            {"subsets": {"t1": "t1.jsonl"}, "direction": ["ita_Latn", "lld_Latn"]},
        )
        system = self.dir / "oracle"
        system.mkdir()
        (system / "t1.txt").write_text(
            "".join(pair.tgt + "\n" for pair in corpus), encoding="utf-8"
        )
        code, out, err = self.cli(
            "eval-mt",
            "--in",
            self.dir / "suite.json",
            "--system",
            f"oracle={system}",
            "--out",
            self.dir / "report.json",
        )
        self.assertEqual(code, 0, err)
        header, row = out.splitlines()
        self.assertTrue(header.startswith("System"))
        self.assertEqual(row.split(), ["oracle"] + ["100.00"] * 6)
        saved = json.loads((self.dir / "report.json").read_text(encoding="utf-8"))
        self.assertEqual(saved["suite"]["subsets"]["t1"]["sentences"], 3)

    def test_eval_mt_needs_a_system(self):
        save_dataset(parallel_dataset(1), self.dir / "t1.jsonl")
        write_json(
            self.dir / "suite.json",
            {"subsets": {"t1": "t1.jsonl"}, "direction": ["ita_Latn", "lld_Latn"]},
        )
        code, _, err = self.cli("eval-mt", "--in", self.dir / "suite.json")
        self.assertEqual(code, 1)
        self.assertIn("--system", err)

    def test_eval_task(self):
        gold = sa_dataset(4)
        save_dataset(gold, self.dir / "gold.jsonl")
        (self.dir / "preds.jsonl").write_text(
            "".join(json.dumps({"id": e.id, "pred": e.label}) + "\n" for e in gold),
            encoding="utf-8",
        )
        report = self.cli_json(
            "eval-task",
            "--in",
            self.dir / "preds.jsonl",
            "--gold",
            self.dir / "gold.jsonl",
            "--task",
            "sa",
        )
        self.assertEqual(report["balanced_accuracy"], 1.0)
        self.assertEqual(report["support"], 4)

    def test_compare_gold(self):
        gold = parallel_dataset(2)
        save_dataset(gold, self.dir / "gold.jsonl")
        save_dataset(gold, self.dir / "synthetic.jsonl")
        config = self.write_config(uniform_reviews(1))
        with patch("requests.Session", return_value=FakeModelSession()):
            result = self.cli_json(
                "compare-gold",
                "--config",
                config,
                "--in",
                self.dir / "synthetic.jsonl",
                "--gold",
                self.dir / "gold.jsonl",
            )
        self.assertEqual(result["pairs"], 2)
        self.assertAlmostEqual(result["score"], 100.0)

    def test_fertility_from_counts_file(self):
        (self.dir / "texts.txt").write_text(
            "Al é n bel dé\ni jon a ciasa incö\n", encoding="utf-8"
        )
        (self.dir / "counts.txt").write_text("7\n8\n", encoding="utf-8")
        result = self.cli_json(
            "fertility",
            "--in",
            self.dir / "texts.txt",
            "--counts",
            self.dir / "counts.txt",
        )
        self.assertEqual(
            result, {"texts": 2, "words": 10, "tokens": 15, "fertility": 1.5}
        )

    def test_fertility_from_tokenizer_service(self):
        write_json(
            self.dir / "tok.json",
            {"endpoints": {"spm": {"base_url": "http://spm.test", "kind": "tokenize"}}},
        )
        (self.dir / "texts.txt").write_text("una due\n", encoding="utf-8")
        session = FakeModelSession(tokenizer=lambda text: 3)
        with patch("requests.Session", return_value=session):
            result = self.cli_json(
                "fertility",
                "--config",
                self.dir / "tok.json",
                "--in",
                self.dir / "texts.txt",
            )
        self.assertEqual(result["fertility"], 1.5)
        self.assertEqual(session.paths(), ["/tokenize"])

    def test_fsl_predict_feeds_eval_task(self):
        write_json(
            self.dir / "llm.json",
            {"endpoints": {"llm": {"base_url": "http://llm.test", "kind": "chat"}}},
        )
        dataset = sa_dataset(6, label=0)
        save_dataset(dataset, self.dir / "reviews.jsonl")
        save_dataset(sa_dataset(4), self.dir / "shots.jsonl")

        def respond(prompt):
            return "[" + ", ".join("0" * prompt.count("label: ]")) + "]"

        session = FakeModelSession(responder=respond)
        with patch("requests.Session", return_value=session):
            result = self.cli_json(
                "fsl-predict",
                "--config",
                self.dir / "llm.json",
                "--task",
                "sa",
                "--in",
                self.dir / "reviews.jsonl",
                "--exemplars",
                self.dir / "shots.jsonl",
                "--out",
                self.dir / "preds.jsonl",
            )
        self.assertEqual(result["predictions"], 6)
        report = self.cli_json(
            "eval-task",
            "--in",
            self.dir / "preds.jsonl",
            "--gold",
            self.dir / "reviews.jsonl",
            "--task",
            "sa",
        )
        self.assertEqual(report["accuracy"], 1.0)

    def test_combine(self):
        save_dataset(parallel_dataset(3), self.dir / "authentic.jsonl")
        save_dataset(parallel_dataset(2), self.dir / "synthetic.jsonl")
        result = self.cli_json(
            "combine",
            "--in",
            self.dir / "authentic.jsonl",
            "--synthetic",
            self.dir / "synthetic.jsonl",
            "--out",
            self.dir / "train.jsonl",
        )
        self.assertEqual(result["entries"], 5)
        self.assertEqual(result["sources"], {"authentic": 3, "synthetic": 2})
