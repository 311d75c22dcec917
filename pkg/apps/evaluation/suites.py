from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any

from apps.core.exceptions import ConfigError, DataError
from apps.core.jsonio import read_json
from apps.core.serializers import flatten_errors
from apps.corpus.choices import DatasetKind
from apps.corpus.io import load_dataset
from apps.corpus.records import ParallelCorpus, count_words
from apps.evaluation.records import EvalSuite
from apps.evaluation.serializers import SuiteManifestSerializer
from apps.metrics.aggregation import unweighted_mean

logger = logging.getLogger(__name__)

HYPOTHESIS_SUFFIX = ".txt"


def orient(corpus: ParallelCorpus, direction: tuple[str, str], name: str = ""):
    """Flip pairs stored in the opposite direction; anything else is an error."""
    src_lang, tgt_lang = direction
    pairs = []
    for pair in corpus:
        if (pair.src_lang, pair.tgt_lang) == (src_lang, tgt_lang):
            pairs.append(pair)
        elif (pair.src_lang, pair.tgt_lang) == (tgt_lang, src_lang):
            pairs.append(pair.reversed())
        else:
            raise DataError(
                f"subset {name!r}: pair {pair.id!r} is {pair.src_lang}→"
                f"{pair.tgt_lang}, suite direction is {src_lang}→{tgt_lang}"
            )
    return corpus.with_entries(pairs)


def load_suite(manifest: str | os.PathLike) -> EvalSuite:
    """Subset paths in the manifest resolve against the manifest's directory."""
    manifest = Path(manifest)
    try:
        document = read_json(manifest)
    except DataError as exc:
        raise ConfigError(f"{manifest}: {exc}") from exc

    serializer = SuiteManifestSerializer(data=document)
    if not serializer.is_valid():
        raise ConfigError(f"{manifest}: {flatten_errors(serializer.errors)}")
    data = serializer.validated_data
    direction = tuple(data["direction"])

    subsets = {}
    for name, relative in data["subsets"].items():
        path = manifest.parent / relative
        if not path.is_file():
            raise ConfigError(f"subset {name!r}: file not found: {path}")
        subsets[name] = orient(
            load_dataset(path, DatasetKind.PARALLEL), direction, name
        )
    return EvalSuite(subsets, direction)


def load_hypotheses(path: str | os.PathLike) -> list[str]:
    """One hypothesis per line; a single trailing newline is not a sentence."""
    text = Path(path).read_text(encoding="utf-8")
    if text.endswith("\n"):
        text = text[:-1]
    if not text:
        return []
    return [line.rstrip("\r") for line in text.split("\n")]


def load_system_outputs(suite: EvalSuite, directory: str | os.PathLike):
    """Read ``<directory>/<subset>.txt`` for every subset of *suite*."""
    directory = Path(directory)
    outputs = {}
    for name in suite.subsets:
        path = directory / f"{name}{HYPOTHESIS_SUFFIX}"
        if not path.is_file():
            raise DataError(f"missing outputs for subset {name!r}: {path}")
        outputs[name] = load_hypotheses(path)
    return outputs


def suite_stats(suite: EvalSuite) -> dict[str, Any]:
    """Subset sizes and average words per sentence for each language."""
    src_lang, tgt_lang = suite.direction
    per_subset = {}
    for name, corpus in suite.subsets.items():
        per_subset[name] = {
            "sentences": len(corpus),
            src_lang: unweighted_mean(count_words(p.src) for p in corpus),
            tgt_lang: unweighted_mean(count_words(p.tgt) for p in corpus),
        }
    return {"direction": [src_lang, tgt_lang], "subsets": per_subset}
