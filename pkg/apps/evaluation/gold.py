from __future__ import annotations

import logging

from apps.backends.choices import EndpointKind
from apps.backends.clients import Target, as_client, embed_batch
from apps.core.exceptions import AlignmentError, EmptyDatasetError
from apps.corpus.records import ParallelCorpus
from apps.metrics.aggregation import unweighted_mean
from apps.metrics.similarity import cosine_similarity

logger = logging.getLogger(__name__)


def compare_to_gold(
    synthetic: ParallelCorpus, gold: ParallelCorpus, embed_target: Target
) -> float:
    """
    100 × mean cosine between the target side of each synthetic pair and the
    target side of the gold pair with the same id.
    """
    client = as_client(embed_target)
    client.endpoint.require_kind(EndpointKind.EMBED)
    if not len(gold):
        raise EmptyDatasetError("gold corpus is empty")

    synthetic_ids, gold_ids = set(synthetic.ids()), set(gold.ids())
    unmatched = synthetic_ids ^ gold_ids
    if unmatched:
        raise AlignmentError("ids present in only one corpus", unmatched)

    by_id = synthetic.by_id()
    ids = gold.ids()
    candidates = embed_batch(client, [by_id[i].tgt for i in ids])
    references = embed_batch(client, [pair.tgt for pair in gold])
    cosines = [cosine_similarity(a, b) for a, b in zip(candidates, references)]
    score = 100.0 * unweighted_mean(cosines)
    logger.info("Synthetic vs gold over %d pairs: %.2f", len(ids), score)
    return score
