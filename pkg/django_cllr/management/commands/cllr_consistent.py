from django_cllr.base import AnalysisCommand, AnalysisResult, render
from django_cllr.loaders import load_term
from django_cllr.semantics import build_lts, verify_llts
from django_cllr.syntax import show


class Command(AnalysisCommand):
    help = "Decide whether a process is consistent (outside the inconsistency predicate)"

    def add_analysis_arguments(self, parser):
        parser.add_argument("term_file", help="Path to a .cllr file")

    def execute_analysis(self, config, **options):
        loaded = load_term(options["term_file"], config.alphabet)
        lts = build_lts(loaded.term, bound=config.bound, alphabet=loaded.alphabet)
        consistent = not lts.inconsistent(lts.initial)
        violations = verify_llts(lts)
        if config.format == "text":
            lines = [f"{show(loaded.term)}: {'consistent' if consistent else 'inconsistent'}"]
            lines += [f"  {violation.axiom} violated at state {violation.state}" for violation in violations]
            return AnalysisResult("\n".join(lines), consistent)
        data = {
            "term": show(loaded.term),
            "consistent": consistent,
            "states": len(lts.states),
            "reachable": len(lts.reachable_states),
            "violations": [{"state": v.state, "axiom": v.axiom} for v in violations],
        }
        return AnalysisResult(render(data, config.format), consistent)
