"""
A fragment of action-based CTL over CLL_R processes.

Formulas are encoded as CLL_R terms so that satisfaction reduces to ready
simulation against the encoding. A direct fixpoint checker over the stable
states of a process graph serves as an independent oracle.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import count
from typing import Optional

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput

from .conf import get_setting, state_bound
from .exceptions import AlphabetTooLarge, EmptyAlphabet, EmptyConjunction, EmptyDisjunction, UnknownAction
from .refinement import refines_graphs, weak_a_f
from .semantics import build_lts, use_normal_form
from .syntax import BOT, NIL, GRAMMAR_DIR, TAU, Conj, Disj, ExtChoice, Prefix, Rec, Var, raise_parse_error

logger = logging.getLogger(__name__)


class Formula:
    def __str__(self):
        return show_formula(self)


@dataclass(frozen=True)
class TT(Formula):
    pass


@dataclass(frozen=True)
class FF(Formula):
    pass


@dataclass(frozen=True)
class En(Formula):
    action: str


@dataclass(frozen=True)
class Dis(Formula):
    action: str


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    action: str
    body: Formula


@dataclass(frozen=True)
class Always(Formula):
    body: Formula


@dataclass(frozen=True)
class WeakUntil(Formula):
    left: Formula
    right: Formula


# ============================================
# PARSING AND PRINTING
# ============================================


@lru_cache(maxsize=None)
def formula_parser():
    return Lark((GRAMMAR_DIR / "actl.lark").read_text(), parser="lalr")


@v_args(inline=True)
class FormulaBuilder(Transformer):
    def tt(self):
        return TT()

    def ff(self):
        return FF()

    def en(self, action):
        return En(str(action))

    def dis(self, action):
        return Dis(str(action))

    def or_(self, left, right):
        return Or(left, right)

    def and_(self, left, right):
        return And(left, right)

    def box(self, action, body):
        return Box(str(action), body)

    def always(self, body):
        return Always(body)

    def weak_until(self, left, right):
        return WeakUntil(left, right)


def formula_actions(formula):
    if isinstance(formula, (En, Dis)):
        return {formula.action}
    if isinstance(formula, Box):
        return {formula.action} | formula_actions(formula.body)
    if isinstance(formula, Always):
        return formula_actions(formula.body)
    if isinstance(formula, (Or, And, WeakUntil)):
        return formula_actions(formula.left) | formula_actions(formula.right)
    return set()


def parse_actl(text, alphabet=None):
    """
    Parse a formula over a finite nonempty alphabet.

    With ``alphabet`` None only the silent action is rejected; callers then
    derive the alphabet from the formula and the process it is checked against.

    Example:
        >>> parse_actl("[a] dis(b) W ff", ["a", "b"])
        WeakUntil(left=Box(action='a', body=Dis(action='b')), right=FF())
    """
    if alphabet is not None:
        alphabet = list(alphabet)
        if not alphabet:
            raise EmptyAlphabet()
    parser = formula_parser()
    try:
        tree = parser.parse(text)
    except UnexpectedInput as exc:
        raise_parse_error(parser, text, exc)
    formula = FormulaBuilder().transform(tree)
    actions = formula_actions(formula)
    if TAU in actions:
        raise UnknownAction(TAU, alphabet or sorted(actions - {TAU}))
    if alphabet is None:
        return formula
    for action in sorted(actions):
        if action not in alphabet:
            raise UnknownAction(action, alphabet)
    return formula


UNTIL_LEVEL, OR_LEVEL, AND_LEVEL, UNARY_LEVEL, ATOM_LEVEL = range(1, 6)


def _formula_level(formula):
    if isinstance(formula, WeakUntil):
        return UNTIL_LEVEL
    if isinstance(formula, Or):
        return OR_LEVEL
    if isinstance(formula, And):
        return AND_LEVEL
    if isinstance(formula, (Box, Always)):
        return UNARY_LEVEL
    return ATOM_LEVEL


def _formula_operand(formula, min_level):
    text = show_formula(formula)
    return f"({text})" if _formula_level(formula) < min_level else text


def show_formula(formula):
    if isinstance(formula, TT):
        return "tt"
    if isinstance(formula, FF):
        return "ff"
    if isinstance(formula, En):
        return f"en({formula.action})"
    if isinstance(formula, Dis):
        return f"dis({formula.action})"
    if isinstance(formula, Box):
        return f"[{formula.action}] {_formula_operand(formula.body, UNARY_LEVEL)}"
    if isinstance(formula, Always):
        return f"A {_formula_operand(formula.body, UNARY_LEVEL)}"
    symbols = {WeakUntil: ("W", UNTIL_LEVEL), Or: ("\\/", OR_LEVEL), And: ("/\\", AND_LEVEL)}
    symbol, level = symbols[type(formula)]
    return f"{_formula_operand(formula.left, level)} {symbol} {_formula_operand(formula.right, level + 1)}"


# ============================================
# ENCODING
# ============================================


def subsets(alphabet):
    """Subsets of the alphabet in ascending bitmask order, the first action being bit 0."""
    alphabet = list(alphabet)
    for mask in range(2 ** len(alphabet)):
        yield [action for bit, action in enumerate(alphabet) if mask >> bit & 1]


def gen_fold(op, items):
    """
    Fold ``items`` left-nested with ExtChoice, Disj or Conj.

    The empty external choice is 0; empty disjunctions and conjunctions are undefined.
    """
    items = list(items)
    if not items:
        if op is ExtChoice:
            return NIL
        if op is Disj:
            raise EmptyDisjunction()
        raise EmptyConjunction()
    return reduce(op, items)


def tt_process(alphabet, var="X"):
    """⟨X | X = ⋁ over A ⊆ Act of □ over a ∈ A of a.X⟩, the process allowing any behaviour."""
    body = gen_fold(Disj, [gen_fold(ExtChoice, [Prefix(a, Var(var)) for a in chosen]) for chosen in subsets(alphabet)])
    return Rec(var, ((var, body),))


def box_a(action, body, alphabet, tt=None):
    """
    The term saying that along every ``action``-transition ``body`` must hold.

    One disjunct per subset A of the alphabet: with ``action`` in A it offers
    every other action of A followed by anything and ``action`` followed by
    ``body``; without it, it offers A followed by anything.
    """
    alphabet = list(alphabet)
    if action not in alphabet:
        raise UnknownAction(action, alphabet)
    tt = tt if tt is not None else tt_process(alphabet)
    with_action = [
        gen_fold(ExtChoice, [Prefix(b, tt) for b in chosen if b != action] + [Prefix(action, body)])
        for chosen in subsets(alphabet)
        if action in chosen
    ]
    without_action = [
        gen_fold(ExtChoice, [Prefix(b, tt) for b in chosen]) for chosen in subsets(alphabet) if action not in chosen
    ]
    return gen_fold(Disj, with_action + without_action)


def check_alphabet(alphabet):
    alphabet = list(alphabet)
    if not alphabet:
        raise EmptyAlphabet()
    cap = get_setting("ALPHABET_CAP")
    if len(alphabet) > cap:
        raise AlphabetTooLarge(len(alphabet), cap)
    return alphabet


class Encoder:
    """Encodes formulas over one alphabet, naming each recursion variable freshly."""

    def __init__(self, alphabet):
        self.alphabet = check_alphabet(alphabet)
        self.tt = tt_process(self.alphabet)
        self._names = (f"X{index}" for index in count(1))

    def ready(self, action, enabled):
        chosen_sets = [chosen for chosen in subsets(self.alphabet) if (action in chosen) == enabled]
        return gen_fold(Disj, [gen_fold(ExtChoice, [Prefix(b, self.tt) for b in chosen]) for chosen in chosen_sets])

    def boxes(self, var):
        return gen_fold(Conj, [box_a(a, Var(var), self.alphabet, self.tt) for a in self.alphabet])

    def encode(self, formula):
        if isinstance(formula, TT):
            return self.tt
        if isinstance(formula, FF):
            return BOT
        if isinstance(formula, En):
            return self.ready(formula.action, True)
        if isinstance(formula, Dis):
            return self.ready(formula.action, False)
        if isinstance(formula, Or):
            return Disj(self.encode(formula.left), self.encode(formula.right))
        if isinstance(formula, And):
            return Conj(self.encode(formula.left), self.encode(formula.right))
        if isinstance(formula, Box):
            return box_a(formula.action, self.encode(formula.body), self.alphabet, self.tt)
        if isinstance(formula, Always):
            var = next(self._names)
            return Rec(var, ((var, Conj(self.encode(formula.body), self.boxes(var))),))
        if isinstance(formula, WeakUntil):
            var = next(self._names)
            body = Disj(self.encode(formula.right), Conj(self.encode(formula.left), self.boxes(var)))
            return Rec(var, ((var, body),))
        raise TypeError(f"Not a formula: {formula!r}")


def encode(formula, alphabet):
    """
    The CLL_R process whose refinements are exactly the models of ``formula``.

    Raises:
        EmptyAlphabet: No actions were declared.
        AlphabetTooLarge: More actions than ALPHABET_CAP.
    """
    return Encoder(alphabet).encode(formula)


# ============================================
# SATISFACTION
# ============================================


class StableSatisfaction:
    """Sets of stable consistent states satisfying each subformula."""

    def __init__(self, lts, alphabet):
        self.lts = lts
        self.alphabet = list(alphabet)
        self.domain = frozenset(state.id for state in lts.states if state.stable and not state.inconsistent)

    def _all_successors_in(self, sid, target_set):
        return all(weak_a_f(self.lts, sid, action) <= target_set for action in self.alphabet)

    def _greatest(self, step):
        current = self.domain
        while True:
            following = step(current)
            if following == current:
                return current
            current = following

    def states(self, formula):
        if isinstance(formula, TT):
            return self.domain
        if isinstance(formula, FF):
            return frozenset()
        if isinstance(formula, En):
            return frozenset(sid for sid in self.domain if formula.action in self.lts.ready(sid))
        if isinstance(formula, Dis):
            return frozenset(sid for sid in self.domain if formula.action not in self.lts.ready(sid))
        if isinstance(formula, Or):
            return self.states(formula.left) | self.states(formula.right)
        if isinstance(formula, And):
            return self.states(formula.left) & self.states(formula.right)
        if isinstance(formula, Box):
            body = self.states(formula.body)
            return frozenset(sid for sid in self.domain if weak_a_f(self.lts, sid, formula.action) <= body)
        if isinstance(formula, Always):
            body = self.states(formula.body)
            return self._greatest(lambda current: frozenset(
                sid for sid in body & current if self._all_successors_in(sid, current)
            ))
        if isinstance(formula, WeakUntil):
            left = self.states(formula.left)
            right = self.states(formula.right)
            return self._greatest(lambda current: right | frozenset(
                sid for sid in left & current if self._all_successors_in(sid, current)
            ))
        raise TypeError(f"Not a formula: {formula!r}")


def sat_direct(process, formula, alphabet, bound=None):
    """
    Decide satisfaction on the graph of ``process``: every stable F-free
    tau-descendant of the initial state must satisfy the formula. Inconsistent
    processes satisfy everything.
    """
    lts = build_lts(process, bound=bound, alphabet=alphabet)
    satisfying = StableSatisfaction(lts, alphabet).states(formula)
    return lts.eps_closure_f(lts.initial) <= satisfying


@lru_cache(maxsize=256)
def formula_lts(formula, alphabet, bound, normal_form):
    """Graph of E(formula) over ``alphabet``, built once per argument tuple."""
    return build_lts(encode(formula, alphabet), bound=bound, alphabet=alphabet, normal_form=normal_form)


def sat_refine(process, formula, alphabet, bound=None):
    """Decide satisfaction as ``process`` ⊑RS E(formula)."""
    left = build_lts(process, bound=bound, alphabet=alphabet)
    right = formula_lts(formula, tuple(alphabet), state_bound(bound), use_normal_form())
    return refines_graphs(left, left.initial, right, right.initial).holds


METHODS = ("direct", "refine", "both")


@dataclass(frozen=True)
class ActlVerdict:
    direct: Optional[bool] = None
    refine: Optional[bool] = None

    @property
    def holds(self):
        return self.refine if self.refine is not None else self.direct

    @property
    def agree(self):
        if self.direct is None or self.refine is None:
            return None
        return self.direct == self.refine

    def to_dict(self):
        return {"holds": self.holds, "direct": self.direct, "refine": self.refine, "agree": self.agree}


def check(process, formula, alphabet, method="both", bound=None):
    """
    Run one or both satisfaction checkers.

    With ``both``, a disagreement is logged as a warning and the refinement
    verdict decides.
    """
    if method not in METHODS:
        raise ValueError(f"Unknown method {method!r}; expected one of {', '.join(METHODS)}")
    direct = sat_direct(process, formula, alphabet, bound) if method in ("direct", "both") else None
    refine = sat_refine(process, formula, alphabet, bound) if method in ("refine", "both") else None
    verdict = ActlVerdict(direct, refine)
    if verdict.agree is False:
        logger.warning(
            "Checkers disagree on %s: direct=%s, refinement=%s", show_formula(formula), direct, refine
        )
    return verdict
