from apps.backends.choices import EndpointKind
from apps.backends.clients import count_tokens
from apps.cli.base import CorpusForgeCommand, existing_file
from apps.corpus.choices import DatasetKind
from apps.corpus.io import load_dataset
from apps.corpus.records import count_words
from apps.evaluation.fertility import load_token_counts, tokenizer_fertility
from apps.evaluation.suites import load_hypotheses
from apps.pipeline.config import select_endpoint


class Command(CorpusForgeCommand):
    help = (
        "Tokens per word of a text collection. Token counts come from --counts "
        "(one integer per line) or from a tokenize endpoint in --config."
    )
    input_help = "texts, one per line, or a dataset when --kind is given"

    def add_command_arguments(self, parser):
        parser.add_argument("--kind", choices=DatasetKind.values)
        parser.add_argument("--counts", help="token counts aligned with the texts")
        parser.add_argument("--endpoint", help="tokenize endpoint name in --config")

    def texts(self, options) -> list[str]:
        path = existing_file(options, "input")
        if options["kind"]:
            return [entry.flat_text() for entry in load_dataset(path, options["kind"])]
        return load_hypotheses(path)

    def plan(self, options):
        step = {"command": "fertility", "input": str(existing_file(options, "input"))}
        if options["counts"]:
            step["counts"] = str(existing_file(options, "counts"))
        else:
            endpoint = self.endpoint(options)
            step.update(endpoint=endpoint.name, url=endpoint.url)
        return step

    def endpoint(self, options):
        config = existing_file(options, "config")
        return select_endpoint(config, options["endpoint"], EndpointKind.TOKENIZE)

    def run(self, options):
        texts = self.texts(options)
        if options["counts"]:
            counts = load_token_counts(existing_file(options, "counts"))
        else:
            counts = count_tokens(self.endpoint(options), texts)
        return {
            "texts": len(texts),
            "words": sum(count_words(text) for text in texts),
            "tokens": sum(counts),
            "fertility": tokenizer_fertility(texts, counts),
        }
