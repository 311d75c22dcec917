from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Mapping, Sequence

from apps.core.exceptions import DataError
from apps.corpus.records import ParallelCorpus
from apps.evaluation.records import EvalReport, EvalSuite
from apps.metrics.registry import DEFAULT_MT_METRICS, get_text_metric

logger = logging.getLogger(__name__)

COLUMN_TITLES = {"bleu": "BLEU", "chrf++": "chrF++", "rouge-l-f1": "ROUGE-L"}


def _score_subset(
    name: str, corpus: ParallelCorpus, hyps: Sequence[str], metrics: Sequence[str]
) -> dict[str, float]:
    if len(hyps) != len(corpus):
        raise DataError(
            f"subset {name!r}: {len(hyps)} outputs for {len(corpus)} sentences"
        )
    refs = [pair.tgt for pair in corpus]
    scores = {m: get_text_metric(m).corpus(list(hyps), refs) for m in metrics}
    logger.info("Scored subset %s (%d sentences)", name, len(corpus))
    return scores


def evaluate_mt(
    suite: EvalSuite,
    outputs: Mapping[str, Sequence[str]],
    *,
    system: str = "system",
    metrics: Sequence[str] = DEFAULT_MT_METRICS,
) -> EvalReport:
    """
    Corpus-level scores per subset plus their unweighted (macro) mean.

    Subsets are scored concurrently; the report is ordered by subset name.
    """
    for metric in metrics:
        get_text_metric(metric)
    missing = [name for name in suite.subsets if name not in outputs]
    if missing:
        raise DataError(f"{system}: missing outputs for subset(s) {', '.join(missing)}")

    with ThreadPoolExecutor(max_workers=len(suite.subsets)) as pool:
        futures = {
            name: pool.submit(_score_subset, name, corpus, outputs[name], metrics)
            for name, corpus in suite.subsets.items()
        }
        per_subset = {name: future.result() for name, future in futures.items()}
    return EvalReport.from_scores(system, suite.direction, per_subset)


def render_table(reports: Sequence[EvalReport]) -> str:
    """Plain-text table: one row per system, subset columns per metric, then macro."""
    if not reports:
        return ""
    subsets = list(reports[0].per_subset)
    metrics = list(reports[0].macro)
    for report in reports[1:]:
        if list(report.per_subset) != subsets or list(report.macro) != metrics:
            raise DataError(
                f"{report.system}: subsets or metrics differ from {reports[0].system}"
            )
    header = ["System"]
    for metric in metrics:
        title = COLUMN_TITLES.get(metric, metric)
        header += [f"{title} {name}" for name in subsets] + [f"{title} avg"]

    rows = [header]
    for report in reports:
        row = [report.system]
        for metric in metrics:
            row += [f"{report.per_subset[name][metric]:.2f}" for name in subsets]
            row.append(f"{report.macro[metric]:.2f}")
        rows.append(row)

    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = []
    for row in rows:
        first, *cells = row
        line = first.ljust(widths[0])
        line += "".join(
            "  " + cell.rjust(width) for cell, width in zip(cells, widths[1:])
        )
        lines.append(line)
    return "\n".join(lines) + "\n"
