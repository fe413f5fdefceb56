from django_cllr.base import AnalysisCommand, AnalysisResult, render
from django_cllr.loaders import load_term, resolve_alphabet
from django_cllr.refinement import equivalent


class Command(AnalysisCommand):
    help = "Check that two processes refine each other"

    def add_analysis_arguments(self, parser):
        parser.add_argument("left", help="Path to a .cllr file")
        parser.add_argument("right", help="Path to a .cllr file")

    def execute_analysis(self, config, **options):
        left = load_term(options["left"], config.alphabet)
        right = load_term(options["right"], config.alphabet)
        alphabet = resolve_alphabet(config.alphabet, left.alphabet, right.alphabet)
        verdict = equivalent(left.term, right.term, bound=config.bound, alphabet=alphabet)
        if config.format == "text":
            text = "\n".join(
                [
                    "equivalent" if verdict.holds else "not equivalent",
                    "left refines right: " + verdict.forward.to_text(),
                    "right refines left: " + verdict.backward.to_text(),
                ]
            )
            return AnalysisResult(text, verdict.holds)
        return AnalysisResult(render(verdict.to_dict(), config.format), verdict.holds)
