from django_cllr.base import AnalysisCommand, AnalysisResult, render
from django_cllr.loaders import load_term
from django_cllr.syntax import alpha_canon, free_vars, show


class Command(AnalysisCommand):
    help = "Parse a term file and print the term in canonical concrete syntax"

    formats = ("text", "json")

    def add_analysis_arguments(self, parser):
        parser.add_argument("term_file", help="Path to a .cllr file")
        parser.add_argument(
            "--canonical",
            action="store_true",
            help="Print the alpha-canonical representative instead of the term as written",
        )

    def execute_analysis(self, config, **options):
        loaded = load_term(options["term_file"], config.alphabet)
        term = alpha_canon(loaded.term) if options.get("canonical") else loaded.term
        if config.format == "text":
            return AnalysisResult(show(term))
        data = {
            "term": show(term),
            "alphabet": list(loaded.alphabet),
            "free": sorted(free_vars(term)),
            "closed": not free_vars(term),
        }
        return AnalysisResult(render(data, config.format))
