"""
Concrete and abstract syntax of CLL_R.

Terms are immutable trees built from frozen dataclasses, so they hash and
compare structurally and can be shared freely. This module provides:
- Parsing of the ASCII grammar in ``grammars/term.lark`` with validation of
  actions and recursive specifications
- The inverse pretty-printer ``show``
- Free variables, capture-avoiding substitution and recursion unfolding
- A canonical representative of each alpha-equivalence class
- Guardedness classification of variable occurrences
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from pathlib import Path
from typing import FrozenSet, List, Sequence, Tuple

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from .exceptions import (
    DuplicateBoundVariable,
    ParseError,
    UnboundInitialVariable,
    UnguardedRecursion,
    UnknownAction,
)

TAU = "tau"

GRAMMAR_DIR = Path(__file__).parent / "grammars"


class Term:
    """Base class of CLL_R abstract syntax trees."""

    def __str__(self):
        return show(self)


def _cached_hash(self):
    value = self.__dict__.get("_hash")
    if value is None:
        value = hash((type(self).__name__,) + tuple(getattr(self, name) for name in self._field_names))
        object.__setattr__(self, "_hash", value)
    return value


def _node_eq(self, other):
    if self is other:
        return True
    if other.__class__ is not self.__class__:
        return NotImplemented
    if hash(self) != hash(other):
        return False
    return all(getattr(self, name) == getattr(other, name) for name in self._field_names)


def node(cls):
    """
    Declare a term node: a frozen dataclass whose hash is computed once per
    instance and compared before the fields.
    """
    cls = dataclass(frozen=True)(cls)
    cls._field_names = tuple(cls.__dataclass_fields__)
    cls.__hash__ = _cached_hash
    cls.__eq__ = _node_eq
    return cls


@node
class Nil(Term):
    """0, the process capable of doing nothing."""


@node
class Bot(Term):
    """The inconsistent process with empty behaviour."""


@node
class Prefix(Term):
    action: str
    body: Term


@node
class ExtChoice(Term):
    left: Term
    right: Term


@node
class Conj(Term):
    left: Term
    right: Term


@node
class Disj(Term):
    left: Term
    right: Term


@node
class Par(Term):
    sync: FrozenSet[str]
    left: Term
    right: Term


@node
class Var(Term):
    name: str


@node
class Rec(Term):
    """
    A recursive specification ⟨init | X1 = t1, ..., Xn = tn⟩.

    ``bindings`` is a tuple of (variable, body) pairs in declaration order.
    """

    init: str
    bindings: Tuple[Tuple[str, Term], ...]

    @property
    def bound_names(self):
        return frozenset(name for name, _ in self.bindings)

    def body_of(self, name):
        for bound, body in self.bindings:
            if bound == name:
                return body
        raise KeyError(name)

    def at(self, name):
        """The process ⟨name | E⟩ sharing this term's equations."""
        return Rec(name, self.bindings)


NIL = Nil()
BOT = Bot()

BINARY = (ExtChoice, Conj, Disj)


@dataclass(frozen=True)
class RecSpec:
    """A guarded recursive specification E(V) with a designated initial variable."""

    bindings: Tuple[Tuple[str, Term], ...]
    init: str

    @classmethod
    def from_mapping(cls, bindings, init):
        return cls(tuple(bindings.items()), init)

    def as_term(self):
        return Rec(self.init, self.bindings)


class GuardMode(IntEnum):
    """How the occurrences of a variable are guarded, ordered UNGUARDED < WEAK < STRONG."""

    UNGUARDED = 0
    WEAK = 1
    STRONG = 2

    @property
    def label(self):
        return self.name.lower()


# ============================================
# PARSING
# ============================================


@lru_cache(maxsize=None)
def term_parser():
    return Lark((GRAMMAR_DIR / "term.lark").read_text(), parser="lalr", maybe_placeholders=True)


@v_args(inline=True)
class TermBuilder(Transformer):
    """Turns the lark parse tree of a term into Term nodes."""

    def nil(self):
        return NIL

    def bot(self):
        return BOT

    def var(self, name):
        return Var(str(name))

    def action(self, token):
        return str(token)

    def actlist(self, *actions):
        return list(actions)

    def prefix(self, action, body):
        return Prefix(action, body)

    def ext_choice(self, left, right):
        return ExtChoice(left, right)

    def disj(self, left, right):
        return Disj(left, right)

    def conj(self, left, right):
        return Conj(left, right)

    def par(self, left, actions, right):
        return Par(frozenset(actions or ()), left, right)

    def binding(self, name, body):
        return (str(name), body)

    def bindings(self, *pairs):
        return list(pairs)

    def rec(self, init, bindings):
        return Rec(str(init), tuple(bindings))


def describe_expected(parser, names):
    """Render lark terminal names as the literal text the user could have typed."""
    described = []
    for name in names:
        try:
            pattern = parser.get_terminal(name).pattern
        except KeyError:
            described.append(name)
            continue
        if pattern.type == "str":
            described.append(repr(pattern.value))
        else:
            described.append(name)
    return described


def raise_parse_error(parser, text, exc):
    """Convert a lark UnexpectedInput into a ParseError with position and expected tokens."""
    if isinstance(exc, UnexpectedToken):
        if exc.token.type == "$END":
            message = "Unexpected end of input"
        else:
            message = f"Unexpected token {str(exc.token)!r}"
        expected = exc.expected
    elif isinstance(exc, UnexpectedCharacters):
        message = f"Unexpected character {text[exc.pos_in_stream]!r}"
        expected = exc.allowed or ()
    elif isinstance(exc, UnexpectedEOF):
        message = "Unexpected end of input"
        expected = exc.expected
    else:
        message = str(exc)
        expected = ()
    line = getattr(exc, "line", None)
    column = getattr(exc, "column", None)
    if line is not None and line < 0:
        line = column = None
    raise ParseError(message, line, column, describe_expected(parser, expected)) from None


def parse_term(text, alphabet=None):
    """
    Parse CLL_R concrete syntax into a validated Term.

    Args:
        text (str): Term text, e.g. ``"<X | X = a.X>"``.
        alphabet (sequence of str, optional): Declared visible actions. When None,
            any lowercase action name is accepted.

    Returns:
        Term: The abstract syntax tree.

    Raises:
        ParseError: The text does not follow the grammar.
        UnknownAction: An action is outside the alphabet.
        DuplicateBoundVariable, UnboundInitialVariable, UnguardedRecursion:
            A recursive specification breaks its invariants.

    Example:
        >>> parse_term("a.0", ["a"])
        Prefix(action='a', body=Nil())
    """
    parser = term_parser()
    try:
        tree = parser.parse(text)
    except UnexpectedInput as exc:
        raise_parse_error(parser, text, exc)
    term = TermBuilder().transform(tree)
    validate_term(term, alphabet)
    return term


def validate_term(term, alphabet=None):
    """
    Check actions against the alphabet and every Rec node against its invariants.

    Synchronisation sets may never contain tau.
    """
    allowed = None if alphabet is None else frozenset(alphabet)
    for node in iter_nodes(term):
        if isinstance(node, Prefix):
            if node.action != TAU and allowed is not None and node.action not in allowed:
                raise UnknownAction(node.action, alphabet)
        elif isinstance(node, Par):
            if TAU in node.sync:
                raise ParseError("tau cannot appear in a synchronisation set")
            for action in sorted(node.sync):
                if allowed is not None and action not in allowed:
                    raise UnknownAction(action, alphabet)
        elif isinstance(node, Rec):
            validate_rec(node)


def validate_rec(rec):
    names = [name for name, _ in rec.bindings]
    if not names:
        raise UnboundInitialVariable(rec.init)
    seen = set()
    for name in names:
        if name in seen:
            raise DuplicateBoundVariable(name)
        seen.add(name)
    if rec.init not in seen:
        raise UnboundInitialVariable(rec.init)
    for owner, body in rec.bindings:
        for name in names:
            if guard_mode(body, name) == GuardMode.UNGUARDED:
                raise UnguardedRecursion(name, owner)


def iter_nodes(term):
    """Yield every node of ``term`` in pre-order."""
    stack = [term]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def children(term):
    if isinstance(term, Prefix):
        return (term.body,)
    if isinstance(term, (ExtChoice, Conj, Disj, Par)):
        return (term.left, term.right)
    if isinstance(term, Rec):
        return tuple(body for _, body in term.bindings)
    return ()


# ============================================
# PRINTING
# ============================================

PAR_LEVEL, CHOICE_LEVEL, DISJ_LEVEL, CONJ_LEVEL, PREFIX_LEVEL, ATOM_LEVEL = range(1, 7)

BINARY_SYNTAX = {
    ExtChoice: ("[]", CHOICE_LEVEL),
    Disj: ("\\/", DISJ_LEVEL),
    Conj: ("/\\", CONJ_LEVEL),
}


def precedence(term):
    if isinstance(term, Par):
        return PAR_LEVEL
    if isinstance(term, BINARY):
        return BINARY_SYNTAX[type(term)][1]
    if isinstance(term, Prefix):
        return PREFIX_LEVEL
    return ATOM_LEVEL


@lru_cache(maxsize=65536)
def show(term):
    """Print ``term`` in concrete syntax with the fewest parentheses parse_term needs."""
    if isinstance(term, Nil):
        return "0"
    if isinstance(term, Bot):
        return "bot"
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Prefix):
        return f"{term.action}.{_operand(term.body, PREFIX_LEVEL)}"
    if isinstance(term, Par):
        sync = ",".join(sorted(term.sync))
        return f"{_operand(term.left, PAR_LEVEL)} |[{sync}]| {_operand(term.right, PAR_LEVEL + 1)}"
    if isinstance(term, BINARY):
        symbol, level = BINARY_SYNTAX[type(term)]
        return f"{_operand(term.left, level)} {symbol} {_operand(term.right, level + 1)}"
    if isinstance(term, Rec):
        equations = ", ".join(f"{name} = {show(body)}" for name, body in term.bindings)
        return f"<{term.init} | {equations}>"
    raise TypeError(f"Not a term: {term!r}")


def _operand(term, min_level):
    text = show(term)
    return f"({text})" if precedence(term) < min_level else text


# ============================================
# VARIABLES AND SUBSTITUTION
# ============================================


@lru_cache(maxsize=65536)
def free_vars(term):
    """
    Return the variables with at least one free occurrence in ``term``.

    A term is a process exactly when this set is empty.
    """
    if isinstance(term, Var):
        return frozenset((term.name,))
    if isinstance(term, Rec):
        inner = frozenset().union(*(free_vars(body) for _, body in term.bindings))
        return inner - term.bound_names
    return frozenset().union(*(free_vars(child) for child in children(term)))


def is_process(term):
    return not free_vars(term)


def fresh_name(base, avoid):
    stem = re.sub(r"\d+$", "", base) or "X"
    for index in itertools.count(1):
        candidate = f"{stem}{index}"
        if candidate not in avoid:
            return candidate


def substitute(term, subst):
    """
    Simultaneously replace the free occurrences of each mapped variable.

    Bound variables of ``term`` are renamed whenever a substituted term's free
    variables would otherwise be captured.

    Args:
        term (Term): Term to substitute into.
        subst (dict): Mapping variable name -> Term.

    Returns:
        Term: The substituted term; ``term`` itself when nothing changes.
    """
    active = {name: value for name, value in subst.items() if value != Var(name)}
    if not active:
        return term
    return _substitute(term, active)


def _substitute(term, subst):
    if isinstance(term, Var):
        return subst.get(term.name, term)
    if isinstance(term, (Nil, Bot)):
        return term
    if not (free_vars(term) & subst.keys()):
        return term
    if isinstance(term, Prefix):
        return Prefix(term.action, _substitute(term.body, subst))
    if isinstance(term, Par):
        return Par(term.sync, _substitute(term.left, subst), _substitute(term.right, subst))
    if isinstance(term, BINARY):
        return type(term)(_substitute(term.left, subst), _substitute(term.right, subst))
    if isinstance(term, Rec):
        active = {name: value for name, value in subst.items() if name not in term.bound_names}
        incoming = frozenset().union(*(free_vars(value) for value in active.values()))
        clash = term.bound_names & incoming
        if clash:
            avoid = set(incoming | free_vars(term) | term.bound_names | active.keys())
            renaming = {}
            for name in sorted(clash):
                renaming[name] = fresh_name(name, avoid)
                avoid.add(renaming[name])
            term = rename_binders(term, renaming)
        return Rec(term.init, tuple((name, _substitute(body, active)) for name, body in term.bindings))
    raise TypeError(f"Not a term: {term!r}")


def rename_binders(rec, renaming):
    """Rename some bound variables of ``rec``; new names must not occur free in it."""
    as_vars = {old: Var(new) for old, new in renaming.items()}
    return Rec(
        renaming.get(rec.init, rec.init),
        tuple((renaming.get(name, name), substitute(body, as_vars)) for name, body in rec.bindings),
    )


@lru_cache(maxsize=65536)
def unfold(rec):
    """
    Return ⟨t_X | E⟩ for ``rec`` = ⟨X | E⟩: the body of the initial variable with
    every free bound variable Y replaced by ⟨Y | E⟩.
    """
    return substitute(rec.body_of(rec.init), {name: rec.at(name) for name in rec.bound_names})


# ============================================
# ALPHA-CANONICAL FORM
# ============================================


def alpha_canon(term):
    """
    Rename bound variables to X0, X1, ... in traversal order.

    Two terms get identical canonical forms exactly when they are
    alpha-equivalent. Equations of a specification count as a set: reachable
    equations are ordered by first reference from the initial one, the others
    by their bodies. Free variables keep their names and generated names avoid
    them. A closed recursive specification is numbered on its own from X0, so
    it may shadow names of an enclosing one.
    """
    avoid = free_vars(term)
    names = (f"X{index}" for index in itertools.count() if f"X{index}" not in avoid)
    return _canon(term, {}, names)


def _canon(term, env, names):
    if isinstance(term, Var):
        return Var(env.get(term.name, term.name))
    if isinstance(term, (Nil, Bot)):
        return term
    if isinstance(term, Prefix):
        return Prefix(term.action, _canon(term.body, env, names))
    if isinstance(term, Par):
        left = _canon(term.left, env, names)
        return Par(term.sync, left, _canon(term.right, env, names))
    if isinstance(term, BINARY):
        left = _canon(term.left, env, names)
        return type(term)(left, _canon(term.right, env, names))
    if isinstance(term, Rec):
        if not free_vars(term):
            return _canon_closed(term)
        return _canon_rec(term, env, names)
    raise TypeError(f"Not a term: {term!r}")


@lru_cache(maxsize=65536)
def _canon_closed(rec):
    return _canon_rec(rec, {}, (f"X{index}" for index in itertools.count()))


def _canon_rec(rec, env, names):
    order = binding_order(rec)
    inner = dict(env)
    for name in order:
        inner[name] = next(names)
    bodies = dict(rec.bindings)
    return Rec(inner[rec.init], tuple((inner[name], _canon(bodies[name], inner, names)) for name in order))


@lru_cache(maxsize=65536)
def binding_order(rec):
    """
    Bound variables of ``rec``: init first, then by first reference. Equations
    nothing reached yet start a new search from the one whose body, printed
    with the placed variables numbered and the others masked, comes first.
    """
    bodies = dict(rec.bindings)
    order = []

    def visit(start):
        position = len(order)
        order.append(start)
        while position < len(order):
            for name in occurrence_order(bodies[order[position]]):
                if name in bodies and name not in order:
                    order.append(name)
            position += 1

    visit(rec.init)
    while len(order) < len(bodies):
        rest = [name for name, _ in rec.bindings if name not in order]
        visit(min(rest, key=lambda name: _masked_body(bodies[name], bodies, order)))
    return tuple(order)


def _masked_body(body, bodies, order):
    placed = {name: index for index, name in enumerate(order)}
    mask = {name: Var(f"#{placed[name]}" if name in placed else "_") for name in bodies}
    return show(alpha_canon(substitute(body, mask)))


@lru_cache(maxsize=65536)
def occurrence_order(term):
    """Free variable occurrences of ``term`` in left-to-right traversal order."""
    if isinstance(term, Var):
        return (term.name,)
    if isinstance(term, Rec):
        bodies = dict(term.bindings)
        found = []
        for name in binding_order(term):
            found.extend(v for v in occurrence_order(bodies[name]) if v not in bodies)
        return tuple(found)
    found = []
    for child in children(term):
        found.extend(occurrence_order(child))
    return tuple(found)


# ============================================
# GUARDEDNESS
# ============================================


def guard_mode(term, variable):
    """
    Classify the free occurrences of ``variable`` in ``term``.

    STRONG when every occurrence lies under a visible prefix, WEAK when every
    occurrence is guarded but some only by a tau-prefix or a disjunction arm,
    UNGUARDED otherwise. Vacuously STRONG when the variable does not occur free.
    """
    return min(_occurrence_guards(term, variable, GuardMode.UNGUARDED), default=GuardMode.STRONG)


def _occurrence_guards(term, variable, current):
    if isinstance(term, Var):
        if term.name == variable:
            yield current
    elif isinstance(term, Prefix):
        level = GuardMode.WEAK if term.action == TAU else GuardMode.STRONG
        yield from _occurrence_guards(term.body, variable, max(current, level))
    elif isinstance(term, Disj):
        yield from _occurrence_guards(term.left, variable, max(current, GuardMode.WEAK))
        yield from _occurrence_guards(term.right, variable, max(current, GuardMode.WEAK))
    elif isinstance(term, Rec):
        if variable not in term.bound_names:
            for _, body in term.bindings:
                yield from _occurrence_guards(body, variable, current)
    else:
        for child in children(term):
            yield from _occurrence_guards(child, variable, current)


def conj_scope_free(term, variable):
    """True iff no free occurrence of ``variable`` lies inside an operand of a conjunction."""
    if isinstance(term, Conj):
        return variable not in free_vars(term)
    if isinstance(term, Rec) and variable in term.bound_names:
        return True
    return all(conj_scope_free(child, variable) for child in children(term))


def collect_actions(term):
    """Visible actions of ``term`` in order of first appearance."""
    found: List[str] = []
    for node in iter_nodes(term):
        if isinstance(node, Prefix) and node.action != TAU:
            candidates: Sequence[str] = (node.action,)
        elif isinstance(node, Par):
            candidates = sorted(node.sync)
        else:
            continue
        for action in candidates:
            if action not in found:
                found.append(action)
    return found


__all__ = [
    "TAU",
    "Term",
    "Nil",
    "Bot",
    "Prefix",
    "ExtChoice",
    "Conj",
    "Disj",
    "Par",
    "Var",
    "Rec",
    "NIL",
    "BOT",
    "RecSpec",
    "GuardMode",
    "parse_term",
    "validate_term",
    "show",
    "free_vars",
    "is_process",
    "substitute",
    "unfold",
    "alpha_canon",
    "guard_mode",
    "conj_scope_free",
    "collect_actions",
]
