from django_cllr.base import AnalysisCommand, AnalysisResult, render
from django_cllr.equations import (
    canonical_report,
    canonical_solution,
    check_greatest,
    check_unique,
    is_solution,
    theorem_holds,
    uniqueness_precondition,
)
from django_cllr.loaders import load_equation
from django_cllr.syntax import conj_scope_free, show

ACTIONS = ("check", "greatest", "unique-pre")


def flag(value):
    if value is None:
        return "-"
    return "yes" if value else "no"


def report_table(reports):
    lines = ["candidate | solution | consistent | refines canonical"]
    for report in reports:
        lines.append(
            " | ".join(
                [
                    show(report.candidate),
                    flag(report.is_solution),
                    flag(report.is_consistent),
                    flag(report.refines_canonical),
                ]
            )
        )
    return lines


class Command(AnalysisCommand):
    help = "Analyse a recursive equation X = t_X and its candidate solutions"

    def add_analysis_arguments(self, parser):
        parser.add_argument("action", choices=ACTIONS, help="Analysis to run")
        parser.add_argument("equation_file", help="Path to a .eq file")

    def execute_analysis(self, config, **options):
        loaded = load_equation(options["equation_file"], config.alphabet, config.bound)
        problem = loaded.problem
        summary = {
            "var": problem.var,
            "body": show(problem.body),
            "alphabet": list(problem.alphabet),
            "guard": problem.guard_mode.label,
        }
        handler = {
            "check": self.check,
            "greatest": self.greatest,
            "unique-pre": self.unique_pre,
        }[options["action"]]
        data, lines, holds = handler(problem, loaded.candidates)
        if config.format == "text":
            return AnalysisResult("\n".join([f"{problem.var} = {summary['body']}"] + lines), holds)
        return AnalysisResult(render(dict(problem=summary, **data), config.format), holds)

    def check(self, problem, candidates):
        reports = [is_solution(candidate, problem) for candidate in candidates]
        holds = all(report.is_solution for report in reports)
        data = {"candidates": [report.to_dict() for report in reports], "allSolutions": holds}
        return data, report_table(reports), holds

    def greatest(self, problem, candidates):
        reports = check_greatest(problem, candidates)
        canonical = canonical_report(problem)
        holds = theorem_holds(reports)
        data = {
            "canonical": canonical.to_dict(),
            "candidates": [report.to_dict() for report in reports],
            "theoremHolds": holds,
        }
        lines = report_table(reports)
        lines.append(
            f"canonical {show(canonical_solution(problem))}: "
            f"solution {flag(canonical.is_solution)}, consistent {flag(canonical.is_consistent)}"
        )
        lines.append("greatest consistent solution: " + ("confirmed" if holds else "refuted"))
        return data, lines, holds

    def unique_pre(self, problem, candidates):
        precondition = uniqueness_precondition(problem)
        report = check_unique(problem, candidates)
        data = {
            "precondition": precondition,
            "conjunctionFree": conj_scope_free(problem.body, problem.var),
            "comparisons": [
                {"left": first, "right": second, "equivalent": equal} for first, second, equal in report.comparisons
            ],
        }
        holds = precondition and report.unique
        lines = [f"uniqueness precondition: {flag(precondition)}"]
        lines += [
            f"candidates {first} and {second}: {'equivalent' if equal else 'different'}"
            for first, second, equal in report.comparisons
        ]
        return data, lines, holds
