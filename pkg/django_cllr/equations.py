"""
Recursive equations X =RS t_X.

A problem is a single equation; candidate processes are checked for being
(consistent) solutions and compared against the canonical solution
⟨X | X = t_X⟩. The solution space itself is never searched.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .exceptions import FreeVariableError, PreconditionNotStronglyGuarded, UnguardedRecursion
from .refinement import refines_graphs
from .semantics import build_lts
from .syntax import GuardMode, Rec, conj_scope_free, free_vars, guard_mode, show, substitute, validate_term

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EquationProblem:
    """
    The equation ``var = body``.

    Args:
        var (str): The unknown.
        body (Term): t_X; its only free variable may be ``var``.
        alphabet (sequence of str, optional): Declared visible actions.
        bound (int, optional): Exploration bound for every graph built.

    Raises:
        FreeVariableError: The body has free variables other than ``var``.
        UnguardedRecursion: ``var`` occurs unguarded in the body.
    """

    var: str
    body: object
    alphabet: Optional[Tuple[str, ...]] = None
    bound: Optional[int] = None

    def __post_init__(self):
        if self.alphabet is not None:
            object.__setattr__(self, "alphabet", tuple(self.alphabet))
        validate_term(self.body, self.alphabet)
        loose = free_vars(self.body) - {self.var}
        if loose:
            raise FreeVariableError(loose)
        if self.guard_mode == GuardMode.UNGUARDED:
            raise UnguardedRecursion(self.var, self.var)

    @property
    def guard_mode(self):
        return guard_mode(self.body, self.var)

    def instantiate(self, process):
        """t_X{process/X}."""
        return substitute(self.body, {self.var: process})


@dataclass(frozen=True)
class SolutionReport:
    candidate: object
    is_solution: bool
    is_consistent: bool
    refines_canonical: Optional[bool] = None

    @property
    def consistent_solution(self):
        return self.is_solution and self.is_consistent

    def to_dict(self):
        return {
            "candidate": show(self.candidate),
            "isSolution": self.is_solution,
            "isConsistent": self.is_consistent,
            "refinesCanonical": self.refines_canonical,
        }


@dataclass(frozen=True)
class UniquenessReport:
    """Pairwise =RS comparison of the consistent solutions among some candidates."""

    precondition: bool
    reports: Tuple[SolutionReport, ...]
    comparisons: Tuple[Tuple[int, int, bool], ...] = field(default=())

    @property
    def unique(self):
        return all(equal for _, _, equal in self.comparisons)

    @property
    def vacuous(self):
        return not self.comparisons


@dataclass(frozen=True)
class TransferCheck:
    """If t_X{p/X} ∉ F for a consistent solution p then ⟨X | X = t_X⟩ ∉ F."""

    premise: bool
    conclusion: bool

    @property
    def holds(self):
        return not self.premise or self.conclusion


def canonical_solution(prob):
    """⟨X | X = t_X⟩."""
    return Rec(prob.var, ((prob.var, prob.body),))


def _consistent(process, prob):
    lts = build_lts(process, bound=prob.bound, alphabet=prob.alphabet)
    return not lts.inconsistent(lts.initial)


def is_solution(process, prob, compare_canonical=True):
    """
    Check whether ``process`` solves the equation.

    ``is_solution`` is p =RS t_X{p/X}; ``is_consistent`` is p ∉ F.
    ``refines_canonical`` (p ⊑RS ⟨X | X = t_X⟩) is only evaluated for
    consistent solutions and when ``compare_canonical`` is set.

    Raises:
        FreeVariableError: ``process`` is not closed.
        StateBoundExceeded: A graph outgrew the bound.
    """
    loose = free_vars(process)
    if loose:
        raise FreeVariableError(loose)
    left = build_lts(process, bound=prob.bound, alphabet=prob.alphabet)
    right = build_lts(prob.instantiate(process), bound=prob.bound, alphabet=prob.alphabet)
    solves = (
        refines_graphs(left, left.initial, right, right.initial).holds
        and refines_graphs(right, right.initial, left, left.initial).holds
    )
    consistent = not left.inconsistent(left.initial)
    refines_canonical = None
    if solves and consistent and compare_canonical:
        canonical = build_lts(canonical_solution(prob), bound=prob.bound, alphabet=prob.alphabet)
        refines_canonical = refines_graphs(left, left.initial, canonical, canonical.initial).holds
    return SolutionReport(process, solves, consistent, refines_canonical)


def check_greatest(prob, candidates):
    """
    Report on every candidate for the greatest-solution theorem.

    Raises:
        PreconditionNotStronglyGuarded: The unknown is not strongly guarded in the body.
    """
    mode = prob.guard_mode
    if mode != GuardMode.STRONG:
        raise PreconditionNotStronglyGuarded(prob.var, mode)
    reports = [is_solution(candidate, prob) for candidate in candidates]
    logger.debug(
        "%d of %d candidates are consistent solutions",
        sum(report.consistent_solution for report in reports),
        len(reports),
    )
    return reports


def theorem_holds(reports):
    """Every consistent solution refines the canonical solution."""
    return all(report.refines_canonical for report in reports if report.consistent_solution)


def canonical_report(prob):
    """Whether ⟨X | X = t_X⟩ is itself a consistent solution."""
    return is_solution(canonical_solution(prob), prob, compare_canonical=False)


def uniqueness_precondition(prob):
    """The unknown is strongly guarded and never inside a conjunction."""
    return prob.guard_mode == GuardMode.STRONG and conj_scope_free(prob.body, prob.var)


def check_unique(prob, candidates: Sequence) -> UniquenessReport:
    """
    Compare every two consistent solutions among ``candidates`` for =RS.

    The comparison runs whether or not the precondition holds; only under the
    precondition is a failed comparison a counterexample to uniqueness.
    """
    candidates = list(candidates)
    reports = tuple(is_solution(candidate, prob, compare_canonical=False) for candidate in candidates)
    solutions: List[int] = [index for index, report in enumerate(reports) if report.consistent_solution]
    comparisons = []
    for first, second in combinations(solutions, 2):
        left = build_lts(candidates[first], bound=prob.bound, alphabet=prob.alphabet)
        right = build_lts(candidates[second], bound=prob.bound, alphabet=prob.alphabet)
        equal = (
            refines_graphs(left, left.initial, right, right.initial).holds
            and refines_graphs(right, right.initial, left, left.initial).holds
        )
        comparisons.append((first, second, equal))
    return UniquenessReport(uniqueness_precondition(prob), reports, tuple(comparisons))


def consistency_transfer(prob, process):
    """
    Check one instance of consistency transfer: for a consistent solution p with
    t_X{p/X} ∉ F, the canonical solution is consistent too.
    """
    report = is_solution(process, prob, compare_canonical=False)
    premise = report.consistent_solution and _consistent(prob.instantiate(process), prob)
    conclusion = _consistent(canonical_solution(prob), prob)
    return TransferCheck(premise, conclusion)
