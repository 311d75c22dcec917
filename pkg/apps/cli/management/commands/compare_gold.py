from apps.backends.choices import EndpointKind
from apps.cli.base import CorpusForgeCommand, existing_file
from apps.corpus.choices import DatasetKind
from apps.corpus.io import load_dataset
from apps.evaluation.gold import compare_to_gold
from apps.pipeline.config import select_endpoint


class Command(CorpusForgeCommand):
    help = (
        "Embedding similarity (x100) between synthetic translations and a "
        "native-speaker gold translation of the same entries"
    )
    input_help = "synthetic parallel corpus"

    def add_command_arguments(self, parser):
        parser.add_argument("--gold", help="gold parallel corpus with the same ids")
        parser.add_argument("--endpoint", help="embed endpoint name in --config")

    def endpoint(self, options):
        config = existing_file(options, "config")
        return select_endpoint(config, options["endpoint"], EndpointKind.EMBED)

    def plan(self, options):
        endpoint = self.endpoint(options)
        return {
            "command": "compare-gold",
            "inputs": [
                str(existing_file(options, "input")),
                str(existing_file(options, "gold")),
            ],
            "endpoint": endpoint.name,
            "url": endpoint.url,
        }

    def run(self, options):
        endpoint = self.endpoint(options)
        synthetic = load_dataset(existing_file(options, "input"), DatasetKind.PARALLEL)
        gold = load_dataset(existing_file(options, "gold"), DatasetKind.PARALLEL)
        score = compare_to_gold(synthetic, gold, endpoint)
        return {"pairs": len(gold), "score": score}
