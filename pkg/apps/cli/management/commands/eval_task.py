from apps.cli.base import CorpusForgeCommand, existing_file
from apps.core.jsonio import write_json
from apps.corpus.choices import DatasetKind
from apps.corpus.io import load_dataset
from apps.evaluation.tasks import align_predictions, evaluate_task, load_predictions


class Command(CorpusForgeCommand):
    help = "Score SA or MCQA predictions against a gold dataset"
    input_help = 'predictions JSONL, one {"id": ..., "pred": ...} per line'
    output_help = "also write the scores as JSON to this file"

    def add_command_arguments(self, parser):
        parser.add_argument(
            "--task", choices=[DatasetKind.SA, DatasetKind.MCQA], required=True
        )
        parser.add_argument("--gold", help="gold dataset of the task")

    def plan(self, options):
        return {
            "command": "eval-task",
            "task": options["task"],
            "inputs": [
                str(existing_file(options, "input")),
                str(existing_file(options, "gold")),
            ],
        }

    def run(self, options):
        gold = load_dataset(existing_file(options, "gold"), options["task"])
        predictions = load_predictions(existing_file(options, "input"))
        preds, golds = align_predictions(predictions, gold)
        report = evaluate_task(preds, golds, options["task"]).to_report()
        if options["output"]:
            write_json(options["output"], report)
        return report
