import requests
from django.test import SimpleTestCase

from apps.backends.tests.fakes import FakeModelSession, client_for
from apps.core.exceptions import DataError, EmptyDatasetError, StageError
from apps.corpus.choices import DatasetKind
from apps.corpus.records import Dataset, ParallelPair, SAEntry
from apps.metrics.similarity import cosine_similarity
from apps.pipeline.similarity import (
    UNDEFINED_COSINE,
    derive_similarity_threshold,
    filter_similarity,
)

# unit vectors at known angles to [1, 0]
VECTORS = {
    "base": [1.0, 0.0],
    "cos 0.5": [0.5, 0.8660254037844386],
    "cos 0.6": [0.6, 0.8],
    "cos 0.68": [0.68, 0.7332121111929344],
    "cos 0.8": [0.8, 0.6],
    "cos 0.9": [0.9, 0.4358898943540673],
}


def table_embedder(texts):
    return [VECTORS[text] for text in texts]


def embed_client(embedder=table_embedder, **overrides):
    session = FakeModelSession(embedder=embedder)
    return client_for("embed", session, **overrides), session


def reference(*targets):
    pairs = tuple(
        ParallelPair(str(i), "base", tgt, "ita_Latn", "lld_Latn")
        for i, tgt in enumerate(targets)
    )
    return Dataset(DatasetKind.PARALLEL, pairs)


class TestDeriveSimilarityThreshold(SimpleTestCase):
    def test_identical_embeddings_give_one(self):
        client, _ = embed_client(embedder=lambda texts: [[1.0, 2.0] for _ in texts])
        pairs = Dataset(
            DatasetKind.PARALLEL,
            (ParallelPair("1", "bun dì", "buongiorno", "lld_Latn", "ita_Latn"),),
        )
        self.assertEqual(derive_similarity_threshold(pairs, client), 1.0)

    def test_mean_of_pair_cosines(self):
        client, _ = embed_client()
        threshold = derive_similarity_threshold(reference("cos 0.6", "cos 0.8"), client)
        self.assertAlmostEqual(threshold, 0.7, places=9)

    def test_empty_reference(self):
        client, session = embed_client()
        with self.assertRaises(EmptyDatasetError):
            derive_similarity_threshold(Dataset(DatasetKind.PARALLEL), client)
        self.assertEqual(session.calls, [])


class TestFilterSimilarity(SimpleTestCase):
    def test_inclusive_threshold(self):
        client, _ = embed_client()
        boundary = cosine_similarity(VECTORS["base"], VECTORS["cos 0.68"])
        retained, decisions = filter_similarity(
            ["base", "base", "base"],
            ["cos 0.5", "cos 0.68", "cos 0.9"],
            client,
            boundary,
        )
        self.assertEqual(retained, [1, 2])
        self.assertEqual([d.passed for d in decisions], [False, True, True])
        self.assertEqual([d.id for d in decisions], ["000001", "000002", "000003"])
        self.assertEqual(decisions[1].scores, {"cosine": boundary})
        self.assertEqual(decisions[1].thresholds, {"cosine": boundary})

    def test_identical_embeddings_pass_threshold_one(self):
        client, _ = embed_client(embedder=lambda texts: [[1.0, 2.0] for _ in texts])
        items = [SAEntry(str(i), f"testo {i}", i % 2) for i in range(5)]
        translations = [SAEntry(str(i), f"test {i}", i % 2) for i in range(5)]
        retained, decisions = filter_similarity(items, translations, client, 1.0)
        self.assertEqual(retained, [0, 1, 2, 3, 4])
        self.assertEqual([d.id for d in decisions], ["0", "1", "2", "3", "4"])

    def test_empty_translation_fails_unembedded(self):
        client, session = embed_client()
        retained, decisions = filter_similarity(
            ["base", "base"], ["cos 0.9", "  "], client, 0.5
        )
        self.assertEqual(retained, [0])
        self.assertEqual(decisions[1].scores, {"cosine": UNDEFINED_COSINE})
        self.assertEqual(decisions[1].note, "empty translation")
        embedded = [text for _, call in session.calls for text in call["texts"]]
        self.assertNotIn("  ", embedded)

    def test_lengths_must_match(self):
        client, _ = embed_client()
        with self.assertRaises(DataError):
            filter_similarity(["base"], [], client, 0.5)

    def test_failure_keeps_earlier_decisions(self):
        calls = []

        def flaky(texts):
            calls.append(texts)
            if len(calls) > 2:
                raise requests.ConnectionError("embedding service went away")
            return table_embedder(texts)

        client, _ = embed_client(embedder=flaky, batch_size=2, max_retries=0)
        with self.assertRaises(StageError) as ctx:
            filter_similarity(
                ["base"] * 4, ["cos 0.9", "cos 0.5", "cos 0.9", "cos 0.9"], client, 0.68
            )
        self.assertEqual(ctx.exception.stage, "filter_sim")
        self.assertEqual(ctx.exception.exit_code, 2)
        self.assertEqual([d.passed for d in ctx.exception.partial], [True, False])
