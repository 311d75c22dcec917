import os
from pathlib import Path
from unittest.mock import patch

from django.test import SimpleTestCase

from apps.backends.serializers import BackendEndpointSerializer
from apps.core.exceptions import ConfigError
from apps.core.jsonio import read_json
from apps.pipeline.choices import PipelineStage, SimilarityMode, ThresholdMode
from apps.pipeline.config import (
    load_endpoints,
    load_run_config,
    parse_run_config,
    select_endpoint,
)
from apps.pipeline.serializers import (
    PreprocessSerializer,
    RoundTripSerializer,
    RunConfigSerializer,
    SimilaritySerializer,
    TranslateSerializer,
)

from .fixtures import PipelineTestCase, run_document, uniform_reviews

DOCS = Path(__file__).resolve().parents[3] / "docs"


class TestRunConfig(PipelineTestCase):
    def test_defaults_and_relative_paths(self):
        config = load_run_config(self.write_config(uniform_reviews(3)))
        self.assertEqual(config.task, "sa")
        self.assertEqual(config.input, self.dir / "input.jsonl")
        self.assertEqual(config.checkpoints, self.dir / "out" / "checkpoints")
        self.assertEqual((config.src_lang, config.tgt_lang), ("ita_Latn", "lld_Latn"))
        self.assertEqual(config.similarity.threshold, 0.68)
        self.assertEqual(config.similarity.mode, SimilarityMode.FIXED)
        self.assertEqual(config.roundtrip.mode, ThresholdMode.DATA_MEAN)
        self.assertEqual(config.roundtrip.endpoint, "mt")
        self.assertEqual(config.preprocess.excluded_choice_counts, (2, 6))
        self.assertEqual(config.endpoint("mt").url, "http://mt.test/translate")
        self.assertEqual(config.endpoint("mt").max_retries, 0)
        self.assertEqual(
            config.stage_endpoints(),
            {
                PipelineStage.TRANSLATE: "mt",
                PipelineStage.FILTER_SIM: "labse",
                PipelineStage.BACKTRANSLATE: "mt",
            },
        )

    def test_overrides(self):
        config = load_run_config(
            self.write_config(uniform_reviews(3)), seed=99, output_dir=self.dir / "b"
        )
        self.assertEqual(config.seed, 99)
        self.assertEqual(config.snapshot()["seed"], 99)
        self.assertEqual(config.checkpoints, self.dir / "b" / "checkpoints")
        self.assertNotIn("output_dir", config.snapshot())

    def test_api_key_from_environment(self):
        with patch.dict(os.environ, {"CF_LABSE_KEY": "sekret"}):
            config = load_run_config(self.write_config(uniform_reviews(1)))
        self.assertEqual(config.endpoint("labse").api_key, "sekret")
        self.assertNotIn("sekret", repr(config.endpoint("labse")))

    def assertRejected(self, message, **overrides):
        with self.assertRaisesMessage(ConfigError, message):
            parse_run_config(run_document(**overrides), self.dir, check_files=False)

    def test_undefined_endpoint(self):
        self.assertRejected("'nllb' is not defined", translate={"endpoint": "nllb"})

    def test_wrong_endpoint_kind(self):
        self.assertRejected(
            "expected embed", similarity={"endpoint": "mt", "threshold": 0.5}
        )

    def test_chat_translation_needs_exemplars(self):
        endpoints = run_document()["endpoints"]
        endpoints["llm"] = {"base_url": "http://llm.test", "kind": "chat"}
        self.assertRejected(
            "needs translate.exemplars",
            endpoints=endpoints,
            translate={"endpoint": "llm"},
        )

    def test_fixed_roundtrip_needs_both_means(self):
        self.assertRejected(
            "mu_meteor", roundtrip={"mode": "fixed", "mu_bleu": 33.63}
        )

    def test_reference_mode_needs_reference(self):
        self.assertRejected(
            "reference", similarity={"endpoint": "labse", "mode": "reference"}
        )

    def test_unknown_key(self):
        self.assertRejected("unexpected field(s) stages", stages=[])

    def test_rewrite_needs_instruction(self):
        self.assertRejected(
            "rewrite.instruction", rewrite={"enabled": True, "endpoint": "mt"}
        )

    def test_threshold_range(self):
        self.assertRejected(
            "threshold", similarity={"endpoint": "labse", "threshold": 1.5}
        )

    def test_missing_input_file(self):
        path = self.write_config(uniform_reviews(1), input="nowhere.jsonl")
        with self.assertRaisesMessage(ConfigError, "input: file not found"):
            load_run_config(path)

    def test_malformed_file(self):
        path = self.dir / "broken.json"
        path.write_text("{ not json", encoding="utf-8")
        with self.assertRaises(ConfigError):
            load_run_config(path)


class TestEndpointSelection(PipelineTestCase):
    def test_single_endpoint_of_a_kind(self):
        path = self.write_config(uniform_reviews(1))
        self.assertEqual(select_endpoint(path, None, "embed").name, "labse")
        self.assertEqual(set(load_endpoints(path)), {"mt", "labse"})

    def test_named_endpoint_must_match_kind(self):
        path = self.write_config(uniform_reviews(1))
        with self.assertRaises(ConfigError):
            select_endpoint(path, "mt", "embed")
        with self.assertRaisesMessage(ConfigError, "'gpt' is not defined"):
            select_endpoint(path, "gpt", "chat")

    def test_no_endpoint_of_the_kind(self):
        path = self.write_config(uniform_reviews(1))
        with self.assertRaisesMessage(ConfigError, "0 tokenize endpoints"):
            select_endpoint(path, None, "tokenize")


class TestPublishedSchema(SimpleTestCase):
    def test_schema_lists_every_config_key(self):
        schema = read_json(DOCS / "pipeline.schema.json")
        self.assertEqual(set(schema["properties"]), set(RunConfigSerializer().fields))
        sections = {
            "preprocess": PreprocessSerializer,
            "translate": TranslateSerializer,
            "similarity": SimilaritySerializer,
            "roundtrip": RoundTripSerializer,
        }
        for section, serializer_class in sections.items():
            with self.subTest(section):
                self.assertEqual(
                    set(schema["properties"][section]["properties"]),
                    set(serializer_class().fields),
                )
        self.assertEqual(
            set(schema["$defs"]["endpoint"]["properties"]),
            set(BackendEndpointSerializer().fields),
        )

    def test_example_config_is_valid(self):
        document = read_json(DOCS / "pipeline.example.json")
        config = parse_run_config(document, DOCS, check_files=False)
        self.assertEqual(config.translate.endpoint, "nllb")
