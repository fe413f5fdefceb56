from django.core.management.base import CommandError

from django_cllr.actl import METHODS, check, encode, formula_actions, parse_actl, show_formula
from django_cllr.base import AnalysisCommand, AnalysisResult, render
from django_cllr.loaders import load_formula_source, load_term, resolve_alphabet
from django_cllr.syntax import show


class Command(AnalysisCommand):
    help = "Encode an ACTL formula as a CLL_R process, or check a process against a formula"

    def add_analysis_arguments(self, parser):
        parser.add_argument("action", choices=("encode", "check"), help="encode FORMULA or check PROCESS FORMULA")
        parser.add_argument("files", nargs="+", help="The .actl file, preceded by a .cllr file for check")
        parser.add_argument(
            "--method",
            choices=METHODS,
            default="both",
            help="Satisfaction checker for check: direct, refine or both (refine decides on disagreement)",
        )

    def execute_analysis(self, config, **options):
        if options["action"] == "encode":
            return self.encode(config, *options["files"])
        return self.check(config, *options["files"])

    def _formula(self, config, path, *sources):
        header, text = load_formula_source(path)
        declared = config.alphabet or header
        formula = parse_actl(text, declared)
        alphabet = resolve_alphabet(declared, *sources, sorted(formula_actions(formula)))
        return formula, alphabet

    def encode(self, config, formula_file, *rest):
        if rest:
            self.usage("encode takes exactly one formula file")
        formula, alphabet = self._formula(config, formula_file)
        term = encode(formula, alphabet)
        if config.format == "text":
            return AnalysisResult(show(term))
        data = {"formula": show_formula(formula), "alphabet": list(alphabet), "term": show(term)}
        return AnalysisResult(render(data, config.format))

    def check(self, config, *files):
        if len(files) != 2:
            self.usage("check takes a process file and a formula file")
        process_file, formula_file = files
        header, _ = load_formula_source(formula_file)
        process = load_term(process_file, config.alphabet or header)
        formula, alphabet = self._formula(config, formula_file, process.alphabet)
        verdict = check(process.term, formula, alphabet, method=config.method or "both", bound=config.bound)
        if config.format == "text":
            lines = [f"{show(process.term)} |= {show_formula(formula)}: {'holds' if verdict.holds else 'fails'}"]
            if verdict.agree is False:
                lines.append(f"checkers disagree (direct={verdict.direct}, refine={verdict.refine})")
            return AnalysisResult("\n".join(lines), verdict.holds)
        data = dict(process=show(process.term), formula=show_formula(formula), alphabet=list(alphabet))
        data.update(verdict.to_dict())
        return AnalysisResult(render(data, config.format), verdict.holds)

    def usage(self, message):
        raise CommandError(f"error:usage: {message}", returncode=2)
