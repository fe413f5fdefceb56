from django_cllr.base import AnalysisCommand, AnalysisResult
from django_cllr.loaders import load_term
from django_cllr.semantics import build_lts, to_dot, to_json, to_text

RENDERERS = {"json": to_json, "dot": to_dot, "text": to_text}


class Command(AnalysisCommand):
    help = "Build the transition model of a process and print it as JSON, DOT or text"

    formats = ("json", "dot", "text")

    def add_analysis_arguments(self, parser):
        parser.add_argument("term_file", help="Path to a .cllr file")

    def execute_analysis(self, config, **options):
        loaded = load_term(options["term_file"], config.alphabet)
        lts = build_lts(loaded.term, bound=config.bound, alphabet=loaded.alphabet)
        return AnalysisResult(RENDERERS[config.format](lts))
