from __future__ import annotations

import copy
import dataclasses
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from django.conf import settings

from apps.backends.choices import EndpointKind, ExemplarSampling
from apps.backends.endpoints import BackendEndpoint
from apps.backends.serializers import EndpointsSerializer
from apps.core.exceptions import ConfigError, DataError
from apps.core.jsonio import read_json
from apps.core.serializers import flatten_errors
from apps.corpus.choices import DatasetKind
from apps.pipeline.choices import PipelineStage, SimilarityMode, ThresholdMode
from apps.pipeline.serializers import RunConfigSerializer

logger = logging.getLogger(__name__)

TRANSLATING_KINDS = (EndpointKind.TRANSLATE, EndpointKind.CHAT)


@dataclass(frozen=True)
class PreprocessOptions:
    length_filter: bool = True
    length_cutoff: int | None = None
    excluded_choice_counts: tuple[int, ...] = ()
    choice_range: tuple[int, int] = (3, 5)


@dataclass(frozen=True)
class RewriteOptions:
    enabled: bool = False
    endpoint: str | None = None
    instruction: str = ""


@dataclass(frozen=True)
class TranslateOptions:
    endpoint: str
    exemplars: Path | None = None
    shots: int | None = None
    sampling: str = ExemplarSampling.FIXED


@dataclass(frozen=True)
class SimilarityOptions:
    endpoint: str
    mode: str = SimilarityMode.FIXED
    threshold: float = 0.68
    reference: Path | None = None


@dataclass(frozen=True)
class RoundTripOptions:
    endpoint: str
    mode: str = ThresholdMode.DATA_MEAN
    mu_bleu: float | None = None
    mu_meteor: float | None = None


@dataclass(frozen=True)
class RunConfig:
    """
    A validated ``pipeline.json`` with paths resolved and overrides applied.

    ``document`` keeps the file's content as validated, relative paths as
    written; it is what reports record about the run.
    """

    task: str
    input: Path
    output_dir: Path
    checkpoint_dir: Path | None
    src_lang: str
    tgt_lang: str
    seed: int
    endpoints: dict[str, BackendEndpoint]
    preprocess: PreprocessOptions
    rewrite: RewriteOptions
    translate: TranslateOptions
    similarity: SimilarityOptions
    roundtrip: RoundTripOptions
    document: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def checkpoints(self) -> Path:
        return self.checkpoint_dir or self.output_dir / "checkpoints"

    def endpoint(self, name: str) -> BackendEndpoint:
        try:
            return self.endpoints[name]
        except KeyError:
            raise ConfigError(f"endpoint {name!r} is not defined") from None

    def stage_endpoints(self) -> dict[str, str]:
        """Endpoint name used by each enabled backend stage."""
        stages = {}
        if self.rewrite.enabled:
            stages[PipelineStage.REWRITE] = self.rewrite.endpoint
        stages[PipelineStage.TRANSLATE] = self.translate.endpoint
        stages[PipelineStage.FILTER_SIM] = self.similarity.endpoint
        stages[PipelineStage.BACKTRANSLATE] = self.roundtrip.endpoint
        return stages

    def with_overrides(
        self,
        *,
        seed: int | None = None,
        output_dir: str | os.PathLike | None = None,
        input: str | os.PathLike | None = None,
    ) -> RunConfig:
        changes: dict[str, Any] = {}
        document = copy.deepcopy(self.document)
        if seed is not None:
            changes["seed"] = document["seed"] = seed
        if output_dir is not None:
            changes["output_dir"] = Path(output_dir)
        if input is not None:
            changes["input"] = Path(input)
            document["input"] = str(input)
        if not changes:
            return self
        return dataclasses.replace(self, document=document, **changes)

    def snapshot(self) -> dict[str, Any]:
        """The run as configured, minus where its files are written."""
        document = copy.deepcopy(self.document)
        document.pop("output_dir", None)
        document.pop("checkpoint_dir", None)
        return document


def _resolve(base_dir: Path, value: str | None) -> Path | None:
    if value is None:
        return None
    path = Path(value).expanduser()
    return path if path.is_absolute() else base_dir / path


def _check_kind(config: RunConfig, stage: str, name: str, kinds) -> None:
    endpoint = config.endpoint(name)
    if endpoint.kind not in kinds:
        expected = " or ".join(str(kind) for kind in kinds)
        raise ConfigError(
            f"{stage}: endpoint {name!r} is a {endpoint.kind} endpoint, "
            f"expected {expected}"
        )


def _check_endpoints(config: RunConfig) -> None:
    if config.rewrite.enabled:
        _check_kind(config, "rewrite", config.rewrite.endpoint, (EndpointKind.CHAT,))
    for stage, name in (
        ("translate", config.translate.endpoint),
        ("backtranslate", config.roundtrip.endpoint),
    ):
        _check_kind(config, stage, name, TRANSLATING_KINDS)
        if (
            config.endpoint(name).kind == EndpointKind.CHAT
            and config.translate.exemplars is None
        ):
            raise ConfigError(
                f"{stage}: chat endpoint {name!r} needs translate.exemplars"
            )
    _check_kind(config, "similarity", config.similarity.endpoint, (EndpointKind.EMBED,))


def check_paths(config: RunConfig) -> None:
    for label, path in (
        ("input", config.input),
        ("translate.exemplars", config.translate.exemplars),
        ("similarity.reference", config.similarity.reference),
    ):
        if path is not None and not path.is_file():
            raise ConfigError(f"{label}: file not found: {path}")


def parse_run_config(
    document: Any, base_dir: str | os.PathLike = ".", *, check_files: bool = True
) -> RunConfig:
    """Validate a ``pipeline.json`` document; relative paths resolve in *base_dir*."""
    serializer = RunConfigSerializer(data=document)
    if not serializer.is_valid():
        raise ConfigError(f"pipeline config: {flatten_errors(serializer.errors)}")
    data = serializer.validated_data
    base_dir = Path(base_dir)
    config = settings.CORPUSFORGE

    preprocess = data.get("preprocess", {})
    rewrite = data.get("rewrite", {})
    translate = data["translate"]
    similarity = data["similarity"]
    roundtrip = data.get("roundtrip", {})
    back_endpoint = data.get("backtranslate", {}).get("endpoint", translate["endpoint"])

    endpoints = {
        name: BackendEndpoint.from_config(name, dict(options))
        for name, options in data["endpoints"].items()
    }
    run = RunConfig(
        task=str(DatasetKind(data["task"])),
        input=_resolve(base_dir, data["input"]),
        output_dir=_resolve(base_dir, data["output_dir"]),
        checkpoint_dir=_resolve(base_dir, data.get("checkpoint_dir")),
        src_lang=data["src_lang"],
        tgt_lang=data["tgt_lang"],
        seed=data["seed"],
        endpoints=endpoints,
        preprocess=PreprocessOptions(
            length_filter=preprocess.get("length_filter", True),
            length_cutoff=preprocess.get("length_cutoff"),
            excluded_choice_counts=tuple(
                preprocess.get(
                    "excluded_choice_counts", config["EXCLUDED_CHOICE_COUNTS"]
                )
            ),
            choice_range=tuple(preprocess.get("choice_range", config["CHOICE_RANGE"])),
        ),
        rewrite=RewriteOptions(
            enabled=rewrite.get("enabled", False),
            endpoint=rewrite.get("endpoint"),
            instruction=rewrite.get("instruction", ""),
        ),
        translate=TranslateOptions(
            endpoint=translate["endpoint"],
            exemplars=_resolve(base_dir, translate.get("exemplars")),
            shots=translate.get("shots"),
            sampling=translate["sampling"],
        ),
        similarity=SimilarityOptions(
            endpoint=similarity["endpoint"],
            mode=similarity["mode"],
            threshold=similarity["threshold"],
            reference=_resolve(base_dir, similarity.get("reference")),
        ),
        roundtrip=RoundTripOptions(
            endpoint=back_endpoint,
            mode=roundtrip.get("mode", ThresholdMode.DATA_MEAN),
            mu_bleu=roundtrip.get("mu_bleu"),
            mu_meteor=roundtrip.get("mu_meteor"),
        ),
        document=_plain(data),
    )
    _check_endpoints(run)
    if check_files:
        check_paths(run)
    return run


def _plain(value: Any) -> Any:
    """Validated data as plain JSON types (DRF hands back OrderedDicts)."""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def load_run_config(
    path: str | os.PathLike,
    *,
    seed: int | None = None,
    output_dir: str | os.PathLike | None = None,
    input: str | os.PathLike | None = None,
) -> RunConfig:
    path = Path(path)
    try:
        document = read_json(path)
    except DataError as exc:
        raise ConfigError(f"pipeline config: {exc}") from exc
    run = parse_run_config(document, path.parent, check_files=False)
    run = run.with_overrides(seed=seed, output_dir=output_dir, input=input)
    check_paths(run)
    logger.info("Loaded run config %s (%s task)", path, run.task)
    return run


def load_endpoints(path: str | os.PathLike) -> dict[str, BackendEndpoint]:
    """Endpoints declared in a pipeline config, without validating the run."""
    try:
        document = read_json(path)
    except DataError as exc:
        raise ConfigError(f"pipeline config: {exc}") from exc
    serializer = EndpointsSerializer(data=document)
    if not serializer.is_valid():
        raise ConfigError(f"pipeline config: {flatten_errors(serializer.errors)}")
    return {
        name: BackendEndpoint.from_config(name, dict(options))
        for name, options in serializer.validated_data["endpoints"].items()
    }


def select_endpoint(
    path: str | os.PathLike, name: str | None, kind: str
) -> BackendEndpoint:
    """The endpoint called *name*, or the only one of *kind* when no name is given."""
    endpoints = load_endpoints(path)
    if name is not None:
        if name not in endpoints:
            raise ConfigError(f"endpoint {name!r} is not defined in {path}")
        endpoint = endpoints[name]
        endpoint.require_kind(kind)
        return endpoint
    matching = [e for e in endpoints.values() if e.kind == kind]
    if len(matching) != 1:
        raise ConfigError(
            f"{path}: {len(matching)} {kind} endpoints defined, "
            "choose one with --endpoint"
        )
    return matching[0]
