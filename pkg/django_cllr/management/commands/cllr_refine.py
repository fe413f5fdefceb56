from django_cllr.base import AnalysisCommand, AnalysisResult, render
from django_cllr.loaders import load_term, resolve_alphabet
from django_cllr.refinement import refines, refines_alt


class Command(AnalysisCommand):
    help = "Check that the left process is ready simulated by the right process"

    def add_analysis_arguments(self, parser):
        parser.add_argument("left", help="Path to the refining .cllr file")
        parser.add_argument("right", help="Path to the refined .cllr file")
        parser.add_argument(
            "--formulation",
            choices=("ready", "alt"),
            default="ready",
            help="Decide via stable ready simulation (ready) or the alternative relation over all states (alt)",
        )

    def execute_analysis(self, config, **options):
        left = load_term(options["left"], config.alphabet)
        right = load_term(options["right"], config.alphabet)
        alphabet = resolve_alphabet(config.alphabet, left.alphabet, right.alphabet)
        check = refines_alt if options.get("formulation") == "alt" else refines
        verdict = check(left.term, right.term, bound=config.bound, alphabet=alphabet)
        if config.format == "text":
            return AnalysisResult(verdict.to_text(), verdict.holds)
        return AnalysisResult(render(verdict.to_dict(), config.format), verdict.holds)
