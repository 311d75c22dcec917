import json
import random
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from apps.core.exceptions import AlignmentError, ConfigError, SchemaError
from apps.corpus.tests.factories import mcqa_dataset, parallel_dataset, sa_dataset
from apps.evaluation.tasks import (
    align_predictions,
    evaluate_task,
    load_predictions,
    save_predictions,
)


class TestEvaluateTask(SimpleTestCase):
    def test_perfect_predictions(self):
        for task, golds in (("sa", [0, 1, 1, 0]), ("mcqa", [0, 2, 1, 3, 4])):
            with self.subTest(task=task):
                scores = evaluate_task(golds, golds, task)
                self.assertEqual((scores.balanced_accuracy, scores.f1), (1.0, 1.0))

    def test_constant_predictor(self):
        scores = evaluate_task([0, 0, 0, 0, 0, 0], [0, 1, 1, 1, 0, 1], "sa")
        self.assertEqual(scores.balanced_accuracy, 0.5)
        # F1 of the positive class: precision 2/6, recall 1
        self.assertAlmostEqual(scores.f1, 0.5)

    def test_mcqa_uses_macro_f1(self):
        scores = evaluate_task([0, 1, 1], [0, 1, 2], "mcqa")
        self.assertAlmostEqual(scores.f1, (1.0 + 2 / 3 + 0.0) / 3)
        self.assertAlmostEqual(scores.balanced_accuracy, 2 / 3)

    def test_invariant_under_joint_permutation(self):
        rng = random.Random(11)
        for _ in range(20):
            golds = [rng.randrange(4) for _ in range(30)]
            preds = [rng.randrange(4) for _ in range(30)]
            order = list(range(30))
            rng.shuffle(order)
            shuffled = evaluate_task(
                [preds[i] for i in order], [golds[i] for i in order], "mcqa"
            )
            original = evaluate_task(preds, golds, "mcqa")
            self.assertAlmostEqual(
                shuffled.balanced_accuracy, original.balanced_accuracy
            )
            self.assertAlmostEqual(shuffled.f1, original.f1)

    def test_unknown_task(self):
        with self.assertRaises(ConfigError):
            evaluate_task([0], [0], "ner")


class TestPredictionFiles(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.path = Path(self.tmp.name) / "preds.jsonl"

    def write(self, *records):
        self.path.write_text(
            "".join(json.dumps(r) + "\n" for r in records), encoding="utf-8"
        )

    def test_saved_predictions_align_with_gold(self):
        gold = sa_dataset(5)
        labels = [entry.label for entry in gold]
        save_predictions(self.path, list(reversed(gold.ids())), labels[::-1])
        preds, golds = align_predictions(load_predictions(self.path), gold)
        self.assertEqual(preds, labels)
        self.assertEqual(golds, labels)

    def test_mcqa_gold_uses_answers(self):
        gold = mcqa_dataset(3)
        save_predictions(self.path, gold.ids(), [0, 0, 0])
        _, golds = align_predictions(load_predictions(self.path), gold)
        self.assertEqual(golds, [3, 3, 3])

    def test_missing_and_unknown_ids(self):
        gold = sa_dataset(3)
        first, second, _ = gold.ids()
        self.write({"id": first, "pred": 0}, {"id": second, "pred": 1})
        with self.assertRaises(AlignmentError) as ctx:
            align_predictions(load_predictions(self.path), gold)
        self.assertEqual(ctx.exception.ids, [gold.ids()[2]])

        self.write(*({"id": i, "pred": 0} for i in gold.ids()), {"id": "x", "pred": 1})
        with self.assertRaisesMessage(AlignmentError, "unknown"):
            align_predictions(load_predictions(self.path), gold)

    def test_bad_records(self):
        cases = {
            "negative": [{"id": "a", "pred": -1}],
            "missing pred": [{"id": "a"}],
            "extra key": [{"id": "a", "pred": 0, "score": 0.3}],
            "duplicate": [{"id": "a", "pred": 0}, {"id": "a", "pred": 1}],
        }
        for name, records in cases.items():
            with self.subTest(name):
                self.write(*records)
                with self.assertRaises(SchemaError):
                    load_predictions(self.path)

    def test_parallel_gold_rejected(self):
        with self.assertRaises(ConfigError):
            align_predictions({}, parallel_dataset(1))
