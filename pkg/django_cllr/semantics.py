"""
Operational semantics of CLL_R.

The transition relation is computed in two strata. Tau-moves come from
negation-free rules only; visible moves of a composite are produced only when
the operands they depend on are stable. Exploration then builds a finite graph
of alpha-canonical terms, closed under the subterms the inconsistency rules
consult, and the inconsistency predicate F is computed as a least fixpoint
over that graph.
"""

import json
import logging
from collections import defaultdict, deque
from dataclasses import dataclass, replace
from functools import lru_cache, reduce
from typing import FrozenSet, Tuple

from .conf import get_setting, state_bound
from .exceptions import FreeVariableError, StateBoundExceeded
from .syntax import (
    TAU,
    Bot,
    Conj,
    Disj,
    ExtChoice,
    Nil,
    Par,
    Prefix,
    Rec,
    Var,
    alpha_canon,
    collect_actions,
    free_vars,
    show,
    unfold,
)

logger = logging.getLogger(__name__)


# ============================================
# STATE IDENTITY
# ============================================


def flatten_conjunction(term):
    if isinstance(term, Conj):
        return flatten_conjunction(term.left) + flatten_conjunction(term.right)
    return [term]


@lru_cache(maxsize=65536)
def conjunction_normal_form(term):
    """
    Flatten nested conjunctions, drop alpha-equal duplicate conjuncts and sort the
    rest by their printed canonical form. Recursion bodies are left untouched.
    """
    if isinstance(term, Conj):
        conjuncts = {}
        for part in flatten_conjunction(term):
            part = alpha_canon(conjunction_normal_form(part))
            conjuncts.setdefault(show(part), part)
        return reduce(Conj, [conjuncts[key] for key in sorted(conjuncts)])
    if isinstance(term, Prefix):
        return Prefix(term.action, conjunction_normal_form(term.body))
    if isinstance(term, Par):
        return Par(term.sync, conjunction_normal_form(term.left), conjunction_normal_form(term.right))
    if isinstance(term, (ExtChoice, Disj)):
        return type(term)(conjunction_normal_form(term.left), conjunction_normal_form(term.right))
    return term


@lru_cache(maxsize=65536)
def canonical(term, normal_form=True):
    """The representative term used as state identity."""
    if normal_form:
        term = conjunction_normal_form(term)
    return alpha_canon(term)


def use_normal_form(normal_form=None):
    return get_setting("CONJUNCTION_NORMAL_FORM") if normal_form is None else normal_form


# ============================================
# TRANSITIONS
# ============================================


def _split(moves):
    taus = [target for label, target in moves if label == TAU]
    visible = [(label, target) for label, target in moves if label != TAU]
    return taus, visible


@lru_cache(maxsize=65536)
def raw_successors(term):
    """
    One-step transitions of a closed term, targets not canonicalized.

    Returns:
        frozenset of (label, target) pairs.
    """
    if isinstance(term, (Nil, Bot)):
        return frozenset()
    if isinstance(term, Prefix):
        return frozenset(((term.action, term.body),))
    if isinstance(term, Disj):
        return frozenset(((TAU, term.left), (TAU, term.right)))
    if isinstance(term, Rec):
        return raw_successors(unfold(term))
    if isinstance(term, Var):
        raise FreeVariableError([term.name])

    left_taus, left_visible = _split(raw_successors(term.left))
    right_taus, right_visible = _split(raw_successors(term.right))

    if isinstance(term, Par):
        build = lambda left, right: Par(term.sync, left, right)  # noqa: E731
    else:
        build = type(term)

    taus = [build(target, term.right) for target in left_taus]
    taus += [build(term.left, target) for target in right_taus]
    if taus:
        return frozenset((TAU, target) for target in taus)

    # Both operands are stable from here on.
    if isinstance(term, ExtChoice):
        return frozenset(left_visible + right_visible)
    if isinstance(term, Conj):
        return frozenset(
            (a, Conj(left, right)) for a, left in left_visible for b, right in right_visible if a == b
        )
    moves = set()
    for a, left in left_visible:
        if a in term.sync:
            moves.update((a, Par(term.sync, left, right)) for b, right in right_visible if b == a)
        else:
            moves.add((a, Par(term.sync, left, term.right)))
    for b, right in right_visible:
        if b not in term.sync:
            moves.add((b, Par(term.sync, term.left, right)))
    return frozenset(moves)


def successors(term, normal_form=None):
    """
    One-step transitions of a closed guarded term, targets in canonical form.

    Example:
        >>> successors(parse_term("a.0 /\\ a.b.0"))
        frozenset({('a', Conj(left=Nil(), right=Prefix(action='b', body=Nil())))})
    """
    normal_form = use_normal_form(normal_form)
    return frozenset((label, canonical(target, normal_form)) for label, target in raw_successors(term))


def components(term):
    """Subprocesses whose inconsistency the predicative rules consult."""
    if isinstance(term, Prefix):
        return (term.body,)
    if isinstance(term, (ExtChoice, Conj, Disj, Par)):
        return (term.left, term.right)
    if isinstance(term, Rec):
        return (unfold(term),)
    return ()


# ============================================
# GRAPHS
# ============================================


@dataclass(frozen=True)
class State:
    id: int
    term: object
    stable: bool
    ready: FrozenSet[str]
    inconsistent: bool
    reachable: bool
    parts: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Violation:
    state: int
    axiom: str


class Lts:
    """
    A finite labelled transition system with inconsistency predicate.

    States are indexed densely in discovery order. Instances are treated as
    immutable once built; ``cache`` memoizes derived weak transitions.
    """

    def __init__(self, states, transitions, initial=0, roots=None, bound=None, alphabet=(), normal_form=False):
        self.states = tuple(states)
        self.transitions = tuple(sorted(set(transitions), key=lambda edge: (edge[0], edge[1], edge[2])))
        self.initial = initial
        self.roots = tuple(roots) if roots is not None else (initial,)
        self.bound = bound
        self.alphabet = tuple(alphabet)
        self.normal_form = normal_form
        self.out = [[] for _ in self.states]
        for source, label, target in self.transitions:
            self.out[source].append((label, target))
        self.index = {state.term: state.id for state in self.states}
        self.cache = {}

    @classmethod
    def assemble(cls, terms, transitions, inconsistent=(), parts=None, initial=0, roots=None, **kwargs):
        """Build an Lts straight from a list of terms and (source, label, target) edges."""
        labels = defaultdict(set)
        for source, label, _ in transitions:
            labels[source].add(label)
        roots = tuple(roots) if roots is not None else (initial,)
        reachable = reachable_from(roots, transitions)
        states = [
            State(
                id=sid,
                term=term,
                stable=TAU not in labels[sid],
                ready=frozenset(labels[sid]),
                inconsistent=sid in inconsistent,
                reachable=sid in reachable,
                parts=tuple(parts[sid]) if parts else (),
            )
            for sid, term in enumerate(terms)
        ]
        return cls(states, transitions, initial=initial, roots=roots, **kwargs)

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return f"<Lts {len(self.states)} states, {len(self.transitions)} transitions>"

    def state_of(self, term):
        """Id of the state whose term is ``term`` up to alpha-equivalence; KeyError when absent."""
        return self.index[canonical(term, self.normal_form)]

    def successors(self, sid, label=None):
        return [target for action, target in self.out[sid] if label is None or action == label]

    def stable(self, sid):
        return self.states[sid].stable

    def ready(self, sid):
        return self.states[sid].ready

    def inconsistent(self, sid):
        return self.states[sid].inconsistent

    @property
    def inconsistent_states(self):
        return frozenset(state.id for state in self.states if state.inconsistent)

    @property
    def reachable_states(self):
        return [state.id for state in self.states if state.reachable]

    def mark_inconsistent(self, inconsistent):
        self.states = tuple(replace(state, inconsistent=state.id in inconsistent) for state in self.states)
        self.cache.clear()

    def stable_descendants(self, sid):
        """States y with sid ⇒ε| y, ignoring F."""
        key = ("stable", sid)
        if key not in self.cache:
            self.cache[key] = frozenset(
                node for node in self._tau_closure(sid, lambda node: True) if self.states[node].stable
            )
        return self.cache[key]

    def tau_reach_f(self, sid):
        """Every state on an F-free tau-path from sid, sid included; empty when sid ∈ F."""
        key = ("reach", sid)
        if key not in self.cache:
            if self.states[sid].inconsistent:
                self.cache[key] = frozenset()
            else:
                self.cache[key] = frozenset(self._tau_closure(sid, lambda node: not self.states[node].inconsistent))
        return self.cache[key]

    def eps_closure_f(self, sid):
        """States y with sid ⇒ε_F| y: stable ends of F-free tau-paths."""
        key = ("eps", sid)
        if key not in self.cache:
            self.cache[key] = frozenset(node for node in self.tau_reach_f(sid) if self.states[node].stable)
        return self.cache[key]

    def _tau_closure(self, sid, allowed):
        seen = {sid}
        queue = deque([sid])
        while queue:
            node = queue.popleft()
            for target in self.successors(node, TAU):
                if target not in seen and allowed(target):
                    seen.add(target)
                    queue.append(target)
        return seen


def reachable_from(roots, transitions):
    out = defaultdict(list)
    for source, _, target in transitions:
        out[source].append(target)
    seen = set(roots)
    queue = deque(roots)
    while queue:
        node = queue.popleft()
        for target in out[node]:
            if target not in seen:
                seen.add(target)
                queue.append(target)
    return seen


# ============================================
# EXPLORATION
# ============================================


def explore(roots, bound=None, alphabet=None, normal_form=None):
    """
    Build one graph containing every root and all it can reach.

    The graph is also closed under component obligations: the subprocesses the
    inconsistency rules consult are added as states (flagged unreachable when
    no transition leads to them) and explored in turn.

    Args:
        roots (list of Term): Closed guarded terms.
        bound (int, optional): Maximal number of states; defaults to the
            configured STATE_BOUND.
        alphabet (sequence of str, optional): Recorded on the graph; inferred from
            the roots when None.
        normal_form (bool, optional): Override CONJUNCTION_NORMAL_FORM.

    Returns:
        Lts: The graph with F computed; ``roots`` holds the root state ids.

    Raises:
        FreeVariableError: A root is not closed.
        StateBoundExceeded: More than ``bound`` distinct states were discovered.
    """
    bound = state_bound(bound)
    normal_form = use_normal_form(normal_form)
    for root in roots:
        loose = free_vars(root)
        if loose:
            raise FreeVariableError(loose)
    if alphabet is None:
        alphabet = []
        for root in roots:
            alphabet.extend(action for action in collect_actions(root) if action not in alphabet)

    terms = []
    index = {}
    queue = deque()

    def intern(term):
        term = canonical(term, normal_form)
        if term not in index:
            if len(terms) >= bound:
                raise StateBoundExceeded(bound)
            index[term] = len(terms)
            terms.append(term)
            queue.append(term)
        return index[term]

    root_ids = [intern(root) for root in roots]
    transitions = []
    parts = {}
    while queue:
        term = queue.popleft()
        sid = index[term]
        moves = sorted(successors(term, normal_form), key=lambda move: (move[0], show(move[1])))
        for label, target in moves:
            transitions.append((sid, label, intern(target)))
        parts[sid] = [intern(part) for part in components(term)]

    lts = Lts.assemble(
        terms,
        transitions,
        parts=[parts[sid] for sid in range(len(terms))],
        initial=root_ids[0],
        roots=root_ids,
        bound=bound,
        alphabet=alphabet,
        normal_form=normal_form,
    )
    lts.mark_inconsistent(compute_f(lts))
    logger.debug(
        "Explored %d states (%d reachable), %d transitions, %d inconsistent",
        len(lts.states),
        len(lts.reachable_states),
        len(lts.transitions),
        len(lts.inconsistent_states),
    )
    return lts


def build_lts(term, bound=None, alphabet=None, normal_form=None):
    """
    Build the transition model of a single process.

    Example:
        >>> lts = build_lts(parse_term("<X | X = a.X>"), 100)
        >>> lts.reachable_states, lts.out[lts.initial]
        ([0], [('a', 0)])
    """
    return explore([term], bound=bound, alphabet=alphabet, normal_form=normal_form)


# ============================================
# INCONSISTENCY
# ============================================


def _premises(lts, state):
    """States whose membership in F can make ``state`` derivable."""
    premises = set(state.parts)
    if isinstance(state.term, (Conj, Rec)):
        premises.update(lts.stable_descendants(state.id))
    if isinstance(state.term, Conj):
        premises.update(target for _, target in lts.out[state.id])
    return premises


def _all_in(ids, inconsistent):
    return all(sid in inconsistent for sid in ids)


def derivable(lts, state, inconsistent):
    """Whether one predicative rule puts ``state`` into F given the current ``inconsistent`` set."""
    term = state.term
    parts = state.parts
    if isinstance(term, Bot):
        return True
    if isinstance(term, (Prefix, Disj)):
        return bool(parts) and _all_in(parts, inconsistent)
    if isinstance(term, (ExtChoice, Par)):
        return any(part in inconsistent for part in parts)
    if isinstance(term, Conj):
        if any(part in inconsistent for part in parts):
            return True
        if state.stable and len(parts) == 2 and lts.ready(parts[0]) != lts.ready(parts[1]):
            return True
        for action in state.ready:
            if _all_in(lts.successors(state.id, action), inconsistent):
                return True
        return _all_in(lts.stable_descendants(state.id), inconsistent)
    if isinstance(term, Rec):
        if any(part in inconsistent for part in parts):
            return True
        return _all_in(lts.stable_descendants(state.id), inconsistent)
    return False


def compute_f(lts):
    """
    Least set of states closed under the predicative rules.

    A worklist re-examines a state only when one of its premises joined F.
    States of hand-assembled graphs carry no parts, so only structure-free
    rules apply to them.

    Returns:
        frozenset of state ids.
    """
    dependents = defaultdict(set)
    for state in lts.states:
        for premise in _premises(lts, state):
            dependents[premise].add(state.id)

    inconsistent = set()
    queue = deque(state.id for state in lts.states)
    while queue:
        sid = queue.popleft()
        if sid in inconsistent:
            continue
        if derivable(lts, lts.states[sid], inconsistent):
            inconsistent.add(sid)
            queue.extend(dependents[sid])
    return frozenset(inconsistent)


def f_closed(lts, subset):
    """True iff no predicative rule derives a state outside ``subset`` from it."""
    subset = frozenset(subset)
    return all(state.id in subset or not derivable(lts, state, subset) for state in lts.states)


def verify_llts(lts):
    """
    Check the logic-LTS axioms on every state.

    Returns:
        list of Violation, empty when the graph is a tau-pure LLTS satisfying the
        backward propagation and divergence axioms plus the requirement that an
        inconsistent state with tau enabled has only inconsistent tau-successors.
    """
    violations = []
    for state in lts.states:
        sid = state.id
        if TAU in state.ready and len(state.ready) > 1:
            violations.append(Violation(sid, "tau-purity"))
        if not state.inconsistent:
            for action in sorted(state.ready):
                if all(lts.inconsistent(target) for target in lts.successors(sid, action)):
                    violations.append(Violation(sid, "LTS1"))
                    break
            if not lts.eps_closure_f(sid):
                violations.append(Violation(sid, "LTS2"))
        elif any(not lts.inconsistent(target) for target in lts.successors(sid, TAU)):
            violations.append(Violation(sid, "moreover"))
    return violations


# ============================================
# RENDERING
# ============================================


def to_dict(lts):
    return {
        "alphabet": list(lts.alphabet),
        "initial": lts.initial,
        "states": [
            {
                "id": state.id,
                "term": show(state.term),
                "stable": state.stable,
                "inconsistent": state.inconsistent,
                "reachable": state.reachable,
            }
            for state in lts.states
        ],
        "transitions": [{"from": source, "label": label, "to": target} for source, label, target in lts.transitions],
    }


def to_json(lts):
    return json.dumps(to_dict(lts), indent=2)


def _dot_node(state):
    label = show(state.term).replace("\\", "\\\\").replace('"', '\\"')
    attributes = [f'label="{state.id}: {label}"']
    if state.inconsistent:
        attributes += ["shape=doublecircle", "style=filled", "fillcolor=lightgray"]
    return f"    s{state.id} [{', '.join(attributes)}];"


def to_dot(lts):
    lines = ["digraph lts {", "    rankdir=LR;", "    node [shape=circle];", "    init [shape=point];"]
    lines += [_dot_node(state) for state in lts.states if state.reachable]
    hidden = [state for state in lts.states if not state.reachable]
    if hidden:
        lines.append("    subgraph cluster_components {")
        lines.append('        label="components";')
        lines += ["    " + _dot_node(state) for state in hidden]
        lines.append("    }")
    lines.append(f"    init -> s{lts.initial};")
    for source, label, target in lts.transitions:
        style = ", style=dashed" if label == TAU else ""
        lines.append(f'    s{source} -> s{target} [label="{label}"{style}];')
    lines.append("}")
    return "\n".join(lines)


def to_text(lts):
    lines = [
        f"states: {len(lts.states)} ({len(lts.reachable_states)} reachable)",
        f"transitions: {len(lts.transitions)}",
        f"initial: {lts.initial}",
    ]
    for state in lts.states:
        flags = []
        if state.stable:
            flags.append("stable")
        if state.inconsistent:
            flags.append("F")
        if not state.reachable:
            flags.append("component")
        suffix = f" [{', '.join(flags)}]" if flags else ""
        lines.append(f"  {state.id}: {show(state.term)}{suffix}")
        for label, target in lts.out[state.id]:
            lines.append(f"    --{label}--> {target}")
    return "\n".join(lines)
