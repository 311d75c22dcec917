import copy
import tempfile
from pathlib import Path

import factory
from django.test import SimpleTestCase

from apps.core.jsonio import write_json
from apps.corpus.choices import DatasetKind
from apps.corpus.io import save_dataset
from apps.corpus.records import Dataset
from apps.corpus.tests.factories import SAEntryFactory
from apps.pipeline.config import load_run_config

ENDPOINTS = {
    "mt": {
        "base_url": "http://mt.test",
        "kind": "translate",
        "batch_size": 16,
        "max_retries": 0,
    },
    "labse": {"base_url": "http://labse.test", "kind": "embed", "batch_size": 64},
}


def run_document(**overrides) -> dict:
    document = {
        "task": "sa",
        "input": "input.jsonl",
        "output_dir": "out",
        "seed": 7,
        "endpoints": copy.deepcopy(ENDPOINTS),
        "translate": {"endpoint": "mt"},
        "similarity": {"endpoint": "labse", "threshold": 0.68},
        "roundtrip": {"mode": "data_mean"},
    }
    document.update(overrides)
    return document


def uniform_reviews(size: int) -> Dataset:
    """Reviews of six tokens each, so the length filter keeps all of them."""
    entries = SAEntryFactory.build_batch(
        size, text=factory.Sequence(lambda n: f"recensione {n} molto bella e pulita")
    )
    return Dataset(DatasetKind.SA, tuple(entries))


class PipelineTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def write_config(self, dataset: Dataset, name="pipeline.json", **overrides):
        save_dataset(dataset, self.dir / "input.jsonl")
        path = self.dir / name
        write_json(path, run_document(**overrides))
        return path

    def make_config(self, dataset: Dataset, *, output_dir=None, **overrides):
        return load_run_config(
            self.write_config(dataset, **overrides), output_dir=output_dir
        )
