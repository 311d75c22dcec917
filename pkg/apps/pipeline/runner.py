from __future__ import annotations

import hashlib
import json
import logging
import time
from contextlib import contextmanager
from typing import Any, Iterator

import requests
from django.conf import settings

from apps.backends.audit import AuditLog
from apps.backends.choices import FslTask
from apps.backends.prompts import FslExampleBank
from apps.backends.transport import BackendClient
from apps.core.exceptions import (
    ConfigError,
    CorpusForgeError,
    DataError,
    StageError,
)
from apps.core.jsonio import dumps_line, write_json
from apps.corpus.choices import DatasetKind
from apps.corpus.io import load_dataset, save_dataset
from apps.corpus.preprocessing import (
    drop_choice_counts,
    enforce_choice_range,
    q3_length_filter,
)
from apps.corpus.records import Dataset, ParallelPair
from apps.metrics.registry import (
    DEFAULT_MT_METRICS,
    ROUNDTRIP_METRICS,
    get_text_metric,
    metric_variants,
)
from apps.pipeline.checkpoints import STAGE_FILES, CheckpointStore
from apps.pipeline.choices import PipelineStage, SimilarityMode
from apps.pipeline.config import PreprocessOptions, RunConfig
from apps.pipeline.records import (
    PipelineReport,
    RoundTripRecord,
    RoundTripThresholds,
    retained_indices,
    score_histogram,
)
from apps.pipeline.rendering import render_flat_text
from apps.pipeline.roundtrip import back_translate, filter_roundtrip
from apps.pipeline.similarity import (
    COSINE,
    derive_similarity_threshold,
    filter_similarity,
)
from apps.pipeline.translation import rewrite_entries, translate_entries

logger = logging.getLogger(__name__)

PAIRS_FILE = "synthetic.pairs.jsonl"
REPORT_FILE = "report.json"
TIMING_FILE = "timing.json"
AUDIT_FILE = "audit.jsonl"


def run_fingerprint(config: RunConfig, dataset: Dataset) -> str:
    digest = hashlib.sha256()
    digest.update(json.dumps(config.snapshot(), sort_keys=True).encode("utf-8"))
    for entry in dataset:
        digest.update(dumps_line(entry.to_json()).encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()


def preprocess_dataset(
    dataset: Dataset, options: PreprocessOptions
) -> tuple[Dataset, dict[str, Any]]:
    """SA: Q3 length filter. MCQA: excluded choice counts, then the allowed range."""
    if dataset.kind == DatasetKind.SA:
        meta: dict[str, Any] = {"length_filter": options.length_filter}
        if options.length_filter:
            dataset, cutoff = q3_length_filter(dataset, options.length_cutoff)
            meta["length_cutoff"] = cutoff
        return dataset, meta
    if dataset.kind != DatasetKind.MCQA:
        raise DataError(f"cannot preprocess a {dataset.kind} dataset")
    low, high = options.choice_range
    dataset = drop_choice_counts(dataset, options.excluded_choice_counts)
    dataset = enforce_choice_range(dataset, low, high)
    return dataset, {
        "excluded_choice_counts": sorted(options.excluded_choice_counts),
        "choice_range": [low, high],
    }


class SynthesisPipeline:
    """
    Preprocess, optional rewrite, translation, similarity filter,
    back-translation and round-trip filter, checkpointed stage by stage.

    ``session`` stands in for the HTTP session of every backend client.
    """

    def __init__(
        self,
        config: RunConfig,
        *,
        session: requests.Session | None = None,
        resume: bool = True,
    ):
        self.config = config
        self.session = session
        self.resume = resume
        self.timing: dict[str, float] = {}
        self.store: CheckpointStore | None = None
        self._clients: dict[str, BackendClient] = {}
        self._audit: AuditLog | None = None

    def client(self, name: str) -> BackendClient:
        if name not in self._clients:
            self._clients[name] = BackendClient(
                self.config.endpoint(name), self.session, audit=self._audit
            )
        return self._clients[name]

    def plan(self) -> list[dict[str, Any]]:
        """Stages this run would execute; touches neither network nor disk."""
        endpoints = self.config.stage_endpoints()
        steps = []
        for stage in PipelineStage:
            if stage == PipelineStage.REWRITE and not self.config.rewrite.enabled:
                continue
            step: dict[str, Any] = {
                "stage": stage.value,
                "checkpoint": str(self.config.checkpoints / STAGE_FILES[stage]),
            }
            name = endpoints.get(stage)
            if name is not None:
                endpoint = self.config.endpoint(name)
                step.update(endpoint=name, kind=str(endpoint.kind), url=endpoint.url)
            steps.append(step)
        return steps

    @contextmanager
    def _stage(self, stage: str) -> Iterator[None]:
        started = time.perf_counter()
        logger.info("Stage %s", stage)
        try:
            yield
        except StageError as exc:
            if exc.partial:
                self.store.save_partial(stage, exc.partial)
            raise
        except CorpusForgeError as exc:
            raise StageError(stage, exc) from exc
        self.timing[str(stage)] = time.perf_counter() - started

    def _preprocess(self, dataset: Dataset) -> tuple[Dataset, dict[str, Any]]:
        stage = PipelineStage.PREPROCESS
        if self.store.is_done(stage):
            return self.store.load_entries(stage, dataset.kind), self.store.meta(stage)
        with self._stage(stage):
            dataset, meta = preprocess_dataset(dataset, self.config.preprocess)
            self.store.save_entries(stage, dataset)
            self.store.complete(stage, meta)
        return dataset, meta

    def _rewrite(self, dataset: Dataset) -> Dataset:
        stage = PipelineStage.REWRITE
        if self.store.is_done(stage):
            return self.store.load_entries(stage, dataset.kind)
        options = self.config.rewrite
        with self._stage(stage):
            entries = rewrite_entries(
                list(dataset), self.client(options.endpoint), options.instruction
            )
            dataset = dataset.with_entries(entries)
            self.store.save_entries(stage, dataset)
            self.store.complete(stage)
        return dataset

    def _bank(self) -> FslExampleBank | None:
        path = self.config.translate.exemplars
        if path is None:
            return None
        corpus = load_dataset(path, DatasetKind.PARALLEL)
        return FslExampleBank.from_dataset(
            FslTask.MT, corpus, self.config.translate.shots
        )

    def _translate(self, source: Dataset, bank: FslExampleBank | None) -> Dataset:
        stage = PipelineStage.TRANSLATE
        if self.store.is_done(stage):
            return self.store.load_entries(stage, source.kind)
        config = self.config
        with self._stage(stage):
            entries = translate_entries(
                list(source),
                self.client(config.translate.endpoint),
                config.src_lang,
                config.tgt_lang,
                bank=bank,
                sampling=config.translate.sampling,
                seed=config.seed,
            )
            forward = source.with_entries(entries)
            self.store.save_entries(stage, forward)
            self.store.complete(stage)
        return forward

    def _similarity_threshold(self) -> float:
        options = self.config.similarity
        if options.mode == SimilarityMode.REFERENCE:
            reference = load_dataset(options.reference, DatasetKind.PARALLEL)
            return derive_similarity_threshold(reference, self.client(options.endpoint))
        return options.threshold

    def _filter_similarity(self, source: Dataset, forward: Dataset):
        stage = PipelineStage.FILTER_SIM
        if self.store.is_done(stage):
            decisions = self.store.load_decisions(stage)
            return decisions, self.store.meta(stage)["threshold"]
        with self._stage(stage):
            threshold = self._similarity_threshold()
            _, decisions = filter_similarity(
                list(source),
                list(forward),
                self.client(self.config.similarity.endpoint),
                threshold,
            )
            self.store.save_decisions(stage, decisions)
            self.store.complete(
                stage, {"mode": self.config.similarity.mode, "threshold": threshold}
            )
        return decisions, threshold

    def _back_translate(
        self, source: Dataset, forward: Dataset, decisions, bank
    ) -> list[RoundTripRecord]:
        stage = PipelineStage.BACKTRANSLATE
        if self.store.is_done(stage):
            return self.store.load_records(stage)
        config = self.config
        survivors = retained_indices(decisions)
        with self._stage(stage):
            records = []
            if survivors:
                records = back_translate(
                    [source[i] for i in survivors],
                    [forward[i] for i in survivors],
                    self.client(config.roundtrip.endpoint),
                    config.src_lang,
                    config.tgt_lang,
                    cosines=[decisions[i].scores[COSINE] for i in survivors],
                    bank=bank,
                    sampling=config.translate.sampling,
                    seed=config.seed,
                )
            self.store.save_records(stage, records)
            self.store.complete(stage)
        return records

    def _filter_roundtrip(self, records: list[RoundTripRecord]):
        stage = PipelineStage.FILTER_RT
        if self.store.is_done(stage):
            meta = self.store.meta(stage)
            thresholds = meta.get("thresholds")
            if thresholds is not None:
                thresholds = RoundTripThresholds.from_json(thresholds)
            return self.store.load_decisions(stage), thresholds
        options = self.config.roundtrip
        with self._stage(stage):
            decisions, thresholds = [], None
            if records:
                _, decisions, thresholds = filter_roundtrip(
                    records,
                    options.mode,
                    mu_bleu=options.mu_bleu,
                    mu_meteor=options.mu_meteor,
                )
            else:
                logger.warning("No entries passed the similarity filter")
            self.store.save_decisions(stage, decisions)
            self.store.complete(
                stage,
                {"thresholds": thresholds.to_json() if thresholds else None},
            )
        return decisions, thresholds

    def _examples(self, records: list[RoundTripRecord]) -> dict[str, list]:
        count = settings.CORPUSFORGE["REPORT_EXAMPLES"]
        ranked = sorted(records, key=lambda r: (r.bleu, r.meteor, r.id))
        return {
            "highest": [r.to_json() for r in reversed(ranked[-count:])],
            "lowest": [r.to_json() for r in ranked[:count]],
        }

    def _histograms(self, decisions, records) -> dict[str, dict[str, list]]:
        bins = settings.CORPUSFORGE["HISTOGRAM_BINS"]
        cosines = [d.scores[COSINE] for d in decisions]
        histograms = {COSINE: score_histogram(cosines, -1.0, 1.0, bins)}
        for metric_id in ROUNDTRIP_METRICS:
            metric = get_text_metric(metric_id)
            key = str(metric.id)
            values = [r.scores[key] for r in records]
            histograms[key] = score_histogram(
                values, 0.0, metric.upper_bound, bins
            )
        return histograms

    def _open(self, dataset: Dataset | None) -> Dataset:
        config = self.config
        if dataset is None:
            dataset = load_dataset(config.input, config.task)
        if dataset.kind != config.task:
            raise ConfigError(
                f"run is configured for {config.task} but got a {dataset.kind} dataset"
            )
        try:
            config.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise DataError(f"cannot create {config.output_dir}: {exc}") from exc
        if settings.CORPUSFORGE["AUDIT_RESPONSES"]:
            self._audit = AuditLog(config.output_dir / AUDIT_FILE)
        self.store = CheckpointStore(
            config.checkpoints, run_fingerprint(config, dataset), self.resume
        )
        return dataset

    def run_until(self, stage: str, dataset: Dataset | None = None) -> dict[str, Any]:
        """
        Run the stages up to *stage*, resuming earlier ones from their
        checkpoints. Stopping after ``filter_rt`` finishes the whole run.
        """
        stage = PipelineStage(stage)
        if stage == PipelineStage.FILTER_RT:
            _, report = self.run(dataset)
            return self._summary(stage, report.stage_counts["after_filter2"])
        if stage == PipelineStage.REWRITE and not self.config.rewrite.enabled:
            raise ConfigError("rewrite is not enabled in this run")

        source, _ = self._preprocess(self._open(dataset))
        if stage == PipelineStage.PREPROCESS:
            return self._summary(stage, len(source))
        if self.config.rewrite.enabled:
            source = self._rewrite(source)
        if stage == PipelineStage.REWRITE:
            return self._summary(stage, len(source))
        bank = self._bank()
        forward = self._translate(source, bank)
        if stage == PipelineStage.TRANSLATE:
            return self._summary(stage, len(forward))
        decisions, _ = self._filter_similarity(source, forward)
        if stage == PipelineStage.FILTER_SIM:
            return self._summary(stage, len(retained_indices(decisions)))
        records = self._back_translate(source, forward, decisions, bank)
        return self._summary(stage, len(records))

    def _summary(self, stage: str, entries: int) -> dict[str, Any]:
        logger.info("Stage %s done: %d entries", stage, entries)
        return {
            "stage": str(stage),
            "entries": entries,
            "checkpoint": str(self.store.path(stage)),
        }

    def run(self, dataset: Dataset | None = None) -> tuple[Dataset, PipelineReport]:
        config = self.config
        dataset = self._open(dataset)
        started = time.perf_counter()

        source, preprocess_meta = self._preprocess(dataset)
        if config.rewrite.enabled:
            source = self._rewrite(source)
        bank = self._bank()
        forward = self._translate(source, bank)
        sim_decisions, sim_threshold = self._filter_similarity(source, forward)
        records = self._back_translate(source, forward, sim_decisions, bank)
        rt_decisions, rt_thresholds = self._filter_roundtrip(records)

        survivors = retained_indices(sim_decisions)
        kept = [survivors[j] for j in retained_indices(rt_decisions)]
        synthetic = self._write_outputs(source, forward, kept)

        report = PipelineReport(
            task=config.task,
            stage_counts={
                "input": len(dataset),
                "after_preprocess": len(source),
                "after_filter1": len(survivors),
                "after_filter2": len(kept),
            },
            thresholds={
                "similarity": {
                    "mode": str(config.similarity.mode),
                    COSINE: sim_threshold,
                },
                "roundtrip": rt_thresholds.to_json() if rt_thresholds else None,
            },
            histograms=self._histograms(sim_decisions, records),
            metrics=metric_variants((*ROUNDTRIP_METRICS, *DEFAULT_MT_METRICS)),
            preprocess=preprocess_meta,
            examples=self._examples(records),
            config=config.snapshot(),
        )
        write_json(config.output_dir / REPORT_FILE, report.to_json())
        write_json(
            config.output_dir / TIMING_FILE,
            {
                "stages": self.timing,
                "total_seconds": time.perf_counter() - started,
            },
        )
        logger.info(
            "Synthetic corpus: %d of %d entries → %s",
            len(kept),
            len(dataset),
            config.output_dir,
        )
        return synthetic, report

    def _write_outputs(self, source: Dataset, forward: Dataset, kept: list[int]):
        config = self.config
        pairs = Dataset(
            DatasetKind.PARALLEL,
            tuple(
                ParallelPair(
                    source[i].id,
                    render_flat_text(source[i]),
                    render_flat_text(forward[i]),
                    config.src_lang,
                    config.tgt_lang,
                )
                for i in kept
            ),
        )
        save_dataset(pairs, config.output_dir / PAIRS_FILE)
        out = config.output_dir
        save_dataset(source.subset(kept), out / language_file(config.src_lang))
        save_dataset(forward.subset(kept), out / language_file(config.tgt_lang))
        return pairs


def language_file(lang: str) -> str:
    return f"synthetic.{lang}.jsonl"


def run_pipeline(
    config: RunConfig,
    dataset: Dataset | None = None,
    *,
    session: requests.Session | None = None,
    resume: bool = True,
) -> tuple[Dataset, PipelineReport]:
    return SynthesisPipeline(config, session=session, resume=resume).run(dataset)
