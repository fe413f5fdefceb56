"""
Ready simulation over logic LTSs.

Three formulations are provided: the stable ready simulation preorder and the
ready simulation preorder derived from it, the alternative formulation over
arbitrary state pairs, and a checker for relations that are alternative ready
simulations up to the stable preorder. Relations between two processes are
computed over their two separately built graphs; a pair is always
(state of the left graph, state of the right graph).
"""

import logging
from collections import defaultdict, deque, namedtuple
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Optional, Tuple

from .semantics import build_lts, explore
from .syntax import TAU, show

logger = logging.getLogger(__name__)

EPSILON = "eps"


class RelationKind(Enum):
    STABLE_RS = "stable-rs"
    ALT = "alt"
    UPTO_WITNESS = "upto-witness"


@dataclass(frozen=True)
class SimRelation:
    kind: RelationKind
    pairs: FrozenSet[Tuple[int, int]]
    left: object = field(default=None, compare=False, repr=False)
    right: object = field(default=None, compare=False, repr=False)

    def __contains__(self, pair):
        return pair in self.pairs

    def __len__(self):
        return len(self.pairs)

    def describe(self):
        """Pairs as printed terms, ordered by state ids."""
        return [
            [show(self.left.states[p].term), show(self.right.states[q].term)] for p, q in sorted(self.pairs)
        ]


@dataclass(frozen=True)
class TraceStep:
    left: str
    right: Optional[str]
    action: Optional[str]

    def to_dict(self):
        return {"left": self.left, "right": self.right, "action": self.action}


@dataclass(frozen=True)
class Counterexample:
    trace: Tuple[TraceStep, ...]
    clause: str

    def to_dict(self):
        return {"trace": [step.to_dict() for step in self.trace], "clause": self.clause}


@dataclass(frozen=True)
class RefinementVerdict:
    holds: bool
    witness: Optional[SimRelation] = None
    counterexample: Optional[Counterexample] = None

    def __post_init__(self):
        if (self.witness is None) == (self.counterexample is None):
            raise ValueError("A verdict carries exactly one of witness and counterexample")
        if self.holds != (self.witness is not None):
            raise ValueError("Only holding verdicts carry a witness")

    def __bool__(self):
        return self.holds

    def to_dict(self):
        if self.holds:
            return {"holds": True, "witness": self.witness.describe()}
        return {"holds": False, "counterexample": self.counterexample.to_dict()}

    def to_text(self):
        if self.holds:
            lines = ["holds"]
            lines += [f"  {left}  <=  {right}" for left, right in self.witness.describe()]
            return "\n".join(lines)
        lines = [f"fails ({self.counterexample.clause})"]
        for step in self.counterexample.trace:
            move = f"--{step.action}--> " if step.action else ""
            right = step.right if step.right is not None else "(no match)"
            lines.append(f"  {move}{step.left}  vs  {right}")
        return "\n".join(lines)


@dataclass(frozen=True)
class EquivalenceVerdict:
    """Refinement checked both ways."""

    forward: RefinementVerdict
    backward: RefinementVerdict

    @property
    def holds(self):
        return self.forward.holds and self.backward.holds

    def __bool__(self):
        return self.holds

    def to_dict(self):
        return {"holds": self.holds, "forward": self.forward.to_dict(), "backward": self.backward.to_dict()}


# ============================================
# WEAK TRANSITIONS
# ============================================


def weak_eps_f(lts, sid):
    """Stable states reachable from ``sid`` along an F-free tau-path."""
    return lts.eps_closure_f(sid)


def weak_a_f(lts, sid, action):
    """
    Stable states q with sid ⇒ε_F r --action--> r' ⇒ε_F| q, every state on
    the way outside F.
    """
    key = ("weak", sid, action)
    if key not in lts.cache:
        found = set()
        for node in lts.tau_reach_f(sid):
            for target in lts.successors(node, action):
                if not lts.inconsistent(target):
                    found |= lts.eps_closure_f(target)
        lts.cache[key] = frozenset(found)
    return lts.cache[key]


def visible_actions(lts, sid):
    return sorted(label for label in lts.ready(sid) if label != TAU)


# ============================================
# GREATEST FIXPOINTS
# ============================================

# A pair (p, q) must be able to answer the move of ``action`` from p to
# ``target`` with some (target, candidate) pair still in the relation.
Obligation = namedtuple("Obligation", ["clause", "action", "target", "candidates"])


class Fixpoint:
    """
    Greatest relation inside the closure of ``seeds`` satisfying a local check
    and a set of matching obligations, computed by iterated pair removal.

    ``removed`` maps every discarded pair to (order, clause, failed obligation).
    """

    def __init__(self, seeds, local_failure, obligations):
        self.local_failure = local_failure
        self.obligations = {}
        self.pairs = set()
        queue = deque()
        for pair in seeds:
            if pair not in self.pairs:
                self.pairs.add(pair)
                queue.append(pair)
        while queue:
            pair = queue.popleft()
            self.obligations[pair] = obligations(pair)
            for obligation in self.obligations[pair]:
                for candidate in obligation.candidates:
                    successor = (obligation.target, candidate)
                    if successor not in self.pairs:
                        self.pairs.add(successor)
                        queue.append(successor)
        self.alive = set(self.pairs)
        self.removed = {}
        self._shrink()

    def _failure(self, pair):
        clause = self.local_failure(pair)
        if clause:
            return clause, None
        for obligation in self.obligations[pair]:
            if not any((obligation.target, candidate) in self.alive for candidate in obligation.candidates):
                return obligation.clause, obligation
        return None

    def _shrink(self):
        dependents = defaultdict(set)
        for pair, obligations in self.obligations.items():
            for obligation in obligations:
                for candidate in obligation.candidates:
                    dependents[(obligation.target, candidate)].add(pair)
        queue = deque(sorted(self.pairs))
        rounds = 0
        while queue:
            pair = queue.popleft()
            rounds += 1
            if pair not in self.alive:
                continue
            failure = self._failure(pair)
            if failure:
                self.alive.discard(pair)
                self.removed[pair] = (len(self.removed),) + failure
                queue.extend(dependents[pair])
        logger.debug("Fixpoint over %d pairs kept %d after %d checks", len(self.pairs), len(self.alive), rounds)

    def match(self, target, candidates):
        """First candidate c, by state id, with (target, c) alive."""
        for candidate in sorted(candidates):
            if (target, candidate) in self.alive:
                return candidate
        return None

    def witness(self, start):
        """The part of the relation needed to justify ``start`` by the chosen matches."""
        found = set(start)
        queue = deque(start)
        while queue:
            pair = queue.popleft()
            for obligation in self.obligations[pair]:
                chosen = (obligation.target, self.match(obligation.target, obligation.candidates))
                if chosen not in found:
                    found.add(chosen)
                    queue.append(chosen)
        return frozenset(found)

    def explain(self, pair, left, right, trace):
        """Follow removal reasons from ``pair`` down to a pair failing a local clause."""
        while True:
            _, clause, obligation = self.removed[pair]
            if obligation is None:
                return Counterexample(tuple(trace), clause)
            if not obligation.candidates:
                trace.append(TraceStep(show(left.states[obligation.target].term), None, obligation.action))
                return Counterexample(tuple(trace), clause)
            pair = min(
                ((obligation.target, candidate) for candidate in obligation.candidates),
                key=lambda candidate_pair: self.removed[candidate_pair][0],
            )
            trace.append(
                TraceStep(show(left.states[pair[0]].term), show(right.states[pair[1]].term), obligation.action)
            )


def _stable_fixpoint(left, right, seeds):
    def local_failure(pair):
        p, q = pair
        if left.inconsistent(p):
            return None
        if right.inconsistent(q):
            return "RS2"
        if left.ready(p) != right.ready(q):
            return "RS4"
        return None

    def obligations(pair):
        p, q = pair
        return [
            Obligation("RS3", action, target, tuple(sorted(weak_a_f(right, q, action))))
            for action in visible_actions(left, p)
            for target in sorted(weak_a_f(left, p, action))
        ]

    return Fixpoint(seeds, local_failure, obligations)


def stable_rs(left, right, seeds=None):
    """
    The stable ready simulation preorder between two graphs.

    Args:
        left (Lts), right (Lts): Built graphs; may be the same object.
        seeds (iterable of pairs, optional): Restrict the computation to the pairs
            these can require. Defaults to all pairs of stable states.

    Returns:
        SimRelation: Largest relation over stable pairs meeting RS2, RS3 and RS4.
    """
    if seeds is None:
        seeds = [
            (p.id, q.id) for p in left.states if p.stable for q in right.states if q.stable
        ]
    fixpoint = _stable_fixpoint(left, right, seeds)
    return SimRelation(RelationKind.STABLE_RS, frozenset(fixpoint.alive), left, right)


def _build_pair(p, q, bound, alphabet):
    return build_lts(p, bound=bound, alphabet=alphabet), build_lts(q, bound=bound, alphabet=alphabet)


def refines(p, q, bound=None, alphabet=None):
    """
    Decide p ⊑RS q: every stable F-free tau-descendant of p is stable ready
    simulated by some stable F-free tau-descendant of q.

    Returns:
        RefinementVerdict: With a witness relation when it holds, otherwise a
        counterexample trace ending at the violated clause.

    Example:
        >>> refines(parse_term("a.0"), parse_term("a.0 \\/ b.0")).holds
        True
    """
    left, right = _build_pair(p, q, bound, alphabet)
    return refines_graphs(left, left.initial, right, right.initial)


def refines_graphs(left, p, right, q):
    """p ⊑RS q for states of two built graphs."""
    left_starts = sorted(weak_eps_f(left, p))
    right_starts = sorted(weak_eps_f(right, q))
    fixpoint = _stable_fixpoint(left, right, [(x, y) for x in left_starts for y in right_starts])

    start = []
    root = TraceStep(show(left.states[p].term), show(right.states[q].term), None)
    for x in left_starts:
        y = fixpoint.match(x, right_starts)
        if y is not None:
            start.append((x, y))
            continue
        if not right_starts:
            trace = [root, TraceStep(show(left.states[x].term), None, EPSILON)]
            return RefinementVerdict(False, counterexample=Counterexample(tuple(trace), "ε-matching"))
        pair = min(((x, y) for y in right_starts), key=lambda failed: fixpoint.removed[failed][0])
        trace = [root, TraceStep(show(left.states[x].term), show(right.states[pair[1]].term), EPSILON)]
        return RefinementVerdict(False, counterexample=fixpoint.explain(pair, left, right, trace))
    witness = SimRelation(RelationKind.STABLE_RS, fixpoint.witness(start), left, right)
    return RefinementVerdict(True, witness=witness)


def _alt_fixpoint(left, right, seeds):
    def local_failure(pair):
        p, q = pair
        if left.stable(p) and right.stable(q) and not left.inconsistent(p):
            if left.ready(p) != right.ready(q):
                return "RS4"
        return None

    def obligations(pair):
        p, q = pair
        right_starts = tuple(sorted(weak_eps_f(right, q)))
        found = [Obligation("ε-matching", EPSILON, target, right_starts) for target in sorted(weak_eps_f(left, p))]
        if left.stable(p) and right.stable(q):
            found += [
                Obligation("RS3", action, target, tuple(sorted(weak_a_f(right, q, action))))
                for action in visible_actions(left, p)
                for target in sorted(weak_a_f(left, p, action))
            ]
        return found

    return Fixpoint(seeds, local_failure, obligations)


def refines_alt(p, q, bound=None, alphabet=None):
    """
    Decide p ⊑ALT q: some relation over arbitrary state pairs containing (p, q)
    matches F-free stable tau-descendants, weak visible moves between stable
    pairs, and ready sets of stable consistent pairs.
    """
    left, right = _build_pair(p, q, bound, alphabet)
    return refines_alt_graphs(left, left.initial, right, right.initial)


def refines_alt_graphs(left, p, right, q):
    fixpoint = _alt_fixpoint(left, right, [(p, q)])
    if (p, q) in fixpoint.alive:
        witness = SimRelation(RelationKind.ALT, fixpoint.witness([(p, q)]), left, right)
        return RefinementVerdict(True, witness=witness)
    trace = [TraceStep(show(left.states[p].term), show(right.states[q].term), None)]
    return RefinementVerdict(False, counterexample=fixpoint.explain((p, q), left, right, trace))


def equivalent(p, q, bound=None, alphabet=None):
    """p =RS q, the kernel of ⊑RS."""
    left, right = _build_pair(p, q, bound, alphabet)
    return EquivalenceVerdict(
        refines_graphs(left, left.initial, right, right.initial),
        refines_graphs(right, right.initial, left, left.initial),
    )


def stable_equivalent(p, q, bound=None, alphabet=None):
    """
    p ≈RS q, the kernel of the stable preorder. Only stable states are related,
    so the answer is False when either process can perform a tau-move.
    """
    left, right = _build_pair(p, q, bound, alphabet)
    if not (left.stable(left.initial) and right.stable(right.initial)):
        return False
    forward = stable_rs(left, right, seeds=[(left.initial, right.initial)])
    backward = stable_rs(right, left, seeds=[(right.initial, left.initial)])
    return (left.initial, right.initial) in forward and (right.initial, left.initial) in backward


# ============================================
# UP-TO TECHNIQUE
# ============================================


def check_upto(rel, left, right):
    """
    Check that ``rel`` is an alternative ready simulation up to the stable preorder.

    Moves are matched up to ⊑~RS ∘ rel ∘ ⊑~RS, with the stable preorder
    computed inside each graph.

    Args:
        rel (SimRelation or iterable of pairs): Pairs (left state, right state).
        left (Lts), right (Lts): The graphs holding the states.

    Returns:
        bool
    """
    pairs = frozenset(rel.pairs if isinstance(rel, SimRelation) else rel)
    if not pairs:
        return True
    below = stable_rs(left, left)
    above = stable_rs(right, right)
    upward = defaultdict(set)
    for x, y in below.pairs:
        upward[x].add(y)
    downward = defaultdict(set)
    for y, z in above.pairs:
        downward[z].add(y)
    images = defaultdict(set)
    for x, y in pairs:
        images[x].add(y)

    def related(p, q):
        middle = {y for x in upward[p] for y in images[x]}
        return bool(middle & downward[q])

    for p, q in sorted(pairs):
        right_starts = weak_eps_f(right, q)
        for target in weak_eps_f(left, p):
            if not any(related(target, candidate) for candidate in right_starts):
                logger.debug("Pair %s fails the epsilon clause", (p, q))
                return False
        if not (left.stable(p) and right.stable(q)):
            continue
        for action in visible_actions(left, p):
            answers = weak_a_f(right, q, action)
            for target in weak_a_f(left, p, action):
                if not any(related(target, candidate) for candidate in answers):
                    logger.debug("Pair %s fails the %s clause", (p, q), action)
                    return False
        if not left.inconsistent(p) and left.ready(p) != right.ready(q):
            logger.debug("Pair %s has different ready sets", (p, q))
            return False
    return True


def place_relation(term_pairs, bound=None, alphabet=None):
    """
    Build one graph for all left terms and one for all right terms and return
    the relation between their states.

    Returns:
        tuple: (SimRelation of kind UPTO_WITNESS, left Lts, right Lts)
    """
    term_pairs = list(term_pairs)
    left = explore([p for p, _ in term_pairs], bound=bound, alphabet=alphabet)
    right = explore([q for _, q in term_pairs], bound=bound, alphabet=alphabet)
    pairs = frozenset(zip(left.roots, right.roots))
    return SimRelation(RelationKind.UPTO_WITNESS, pairs, left, right), left, right
