from pathlib import Path

from apps.backends.choices import EndpointKind, ExemplarSampling
from apps.backends.fsl import fsl_predict
from apps.backends.prompts import FslExampleBank
from apps.cli.base import CorpusForgeCommand, existing_file
from apps.corpus.choices import DatasetKind
from apps.corpus.io import load_dataset
from apps.evaluation.tasks import save_predictions
from apps.pipeline.config import select_endpoint


class Command(CorpusForgeCommand):
    help = (
        "Few-shot SA or MCQA predictions from a chat endpoint, written as "
        "predictions JSONL for eval-task"
    )
    input_help = "dataset to label"
    output_help = "predictions JSONL"

    def add_command_arguments(self, parser):
        parser.add_argument(
            "--task", choices=[DatasetKind.SA, DatasetKind.MCQA], required=True
        )
        parser.add_argument("--exemplars", help="labelled examples of the same task")
        parser.add_argument("--shots", type=int)
        parser.add_argument(
            "--sampling",
            choices=ExemplarSampling.values,
            default=ExemplarSampling.FIXED,
        )
        parser.add_argument("--endpoint", help="chat endpoint name in --config")

    def endpoint(self, options):
        config = existing_file(options, "config")
        return select_endpoint(config, options["endpoint"], EndpointKind.CHAT)

    def plan(self, options):
        endpoint = self.endpoint(options)
        return {
            "command": "fsl-predict",
            "task": options["task"],
            "inputs": [
                str(existing_file(options, "input")),
                str(existing_file(options, "exemplars")),
            ],
            "output": str(self.require(options, "output")),
            "endpoint": endpoint.name,
            "url": endpoint.url,
        }

    def run(self, options):
        task = options["task"]
        endpoint = self.endpoint(options)
        dataset = load_dataset(existing_file(options, "input"), task)
        examples = load_dataset(existing_file(options, "exemplars"), task)
        bank = FslExampleBank.from_dataset(task, examples, options["shots"])
        output = Path(self.require(options, "output"))
        preds = fsl_predict(
            endpoint,
            bank,
            list(dataset),
            task,
            sampling=options["sampling"],
            seed=options["seed"] or 0,
        )
        save_predictions(output, dataset.ids(), preds)
        return {"predictions": len(preds), "output": str(output)}
