"""
Property suites over random closed guarded terms.

Graphs that outgrow the state bound of the test settings are discarded.
"""

from itertools import combinations

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from django_cllr.actl import TT, And, encode, sat_direct, sat_refine
from django_cllr.equations import EquationProblem, canonical_solution, check_unique
from django_cllr.refinement import (
    check_upto,
    place_relation,
    refines,
    refines_alt,
    refines_alt_graphs,
    refines_graphs,
    stable_rs,
)
from django_cllr.semantics import build_lts, compute_f, f_closed, to_dict, verify_llts
from django_cllr.syntax import BOT, NIL, Bot, Conj, Disj, ExtChoice, Nil, Par, Prefix, Rec, parse_term, substitute, unfold

from .strategies import ACTIONS, contexts, formulas, guarded_bodies, processes, terms, within_bound


def relaxed(max_examples):
    return settings(
        max_examples=max_examples,
        deadline=None,
        suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
    )


def in_f(term):
    lts = build_lts(term)
    return lts.inconsistent(lts.initial)


class TestInconsistencyNormalForms:
    @relaxed(500)
    @given(terms(depth=4))
    def test_top_level_clause(self, p):
        with within_bound():
            inconsistent = in_f(p)
            if isinstance(p, Nil):
                assert not inconsistent
            elif isinstance(p, Bot):
                assert inconsistent
            elif isinstance(p, Prefix):
                assert inconsistent == in_f(p.body)
            elif isinstance(p, Disj):
                assert inconsistent == (in_f(p.left) and in_f(p.right))
            elif isinstance(p, (ExtChoice, Par)):
                assert inconsistent == (in_f(p.left) or in_f(p.right))
            elif isinstance(p, Conj):
                if in_f(p.left) or in_f(p.right):
                    assert inconsistent
            elif isinstance(p, Rec):
                assert inconsistent == in_f(unfold(p))

    def test_constants(self):
        assert not in_f(NIL)
        assert in_f(BOT)


class TestLltsEmergence:
    @relaxed(500)
    @given(processes())
    def test_built_graphs_satisfy_the_axioms(self, p):
        with within_bound():
            lts = build_lts(p, bound=2000)
        assert verify_llts(lts) == []


class TestFormulationAgreement:
    @relaxed(150)
    @given(processes(depth=3), processes(depth=3))
    def test_random_pairs(self, p, q):
        with within_bound():
            assert refines(p, q).holds == refines_alt(p, q).holds

    @relaxed(150)
    @given(processes(depth=3), processes(depth=3))
    def test_disjunctive_pairs(self, p, r):
        q = Disj(p, r)
        with within_bound():
            forward = refines(p, q).holds
            assert forward == refines_alt(p, q).holds
            assert refines(q, p).holds == refines_alt(q, p).holds
        assert forward


@st.composite
def refining_pairs(draw):
    p, r = draw(processes(depth=2)), draw(processes(depth=2))
    return draw(st.sampled_from([(p, p), (p, Disj(p, r)), (Conj(p, r), p), (r, Disj(p, r))]))


class TestPrecongruence:
    @relaxed(200)
    @given(refining_pairs(), contexts())
    def test_contexts_preserve_refinement(self, pair, context):
        p, q = pair
        with within_bound():
            assume(refines(p, q).holds)
            assert refines(substitute(context, {"H": p}), substitute(context, {"H": q})).holds


UNIQUE_BODIES = [
    "a.X",
    "a.X [] b.0",
    "a.X \\/ b.X",
    "a.b.X",
    "a.X [] b.X",
    "a.(X \\/ 0)",
    "a.0 \\/ b.X",
    "a.X [] b.a.X",
    "a.X \\/ a.b.X",
    "b.(a.X [] b.0)",
    "(a.X \\/ b.0) [] b.X",
]


def unfoldings(prob, count=3):
    candidate = canonical_solution(prob)
    found = [candidate]
    for _ in range(count - 1):
        candidate = prob.instantiate(candidate)
        found.append(candidate)
    return found


class TestUniqueness:
    @relaxed(50)
    @given(guarded_bodies(), st.lists(processes(depth=2), max_size=2))
    def test_consistent_solutions_are_equivalent(self, body, extra):
        prob = EquationProblem("X", body, alphabet=ACTIONS)
        with within_bound():
            report = check_unique(prob, unfoldings(prob) + extra)
        assert report.precondition
        assert report.unique

    def test_non_vacuous_instances(self):
        for text in UNIQUE_BODIES:
            prob = EquationProblem("X", parse_term(text), alphabet=ACTIONS)
            report = check_unique(prob, unfoldings(prob))
            assert report.precondition, text
            assert not report.vacuous, text
            assert report.unique, text


class TestActlCompatibility:
    @relaxed(200)
    @given(processes(depth=3), formulas(depth=3))
    def test_checkers_agree(self, p, formula):
        with within_bound():
            assert sat_direct(p, formula, ACTIONS) == sat_refine(p, formula, ACTIONS)

    @relaxed(100)
    @given(processes(depth=3))
    def test_refining_bot_means_inconsistent(self, p):
        with within_bound():
            assert refines(p, BOT).holds == in_f(p)

    @relaxed(100)
    @given(processes(depth=3))
    def test_consistent_processes_refine_tt(self, p):
        with within_bound():
            assume(not in_f(p))
            assert refines(p, encode(TT(), ACTIONS)).holds


def powerset(items):
    for size in range(len(items) + 1):
        yield from combinations(items, size)


class TestInconsistencyMinimality:
    @relaxed(50)
    @given(processes(depth=3))
    def test_least_closed_set(self, p):
        with within_bound():
            lts = build_lts(p, bound=12)
        inconsistent = compute_f(lts)
        assert inconsistent == lts.inconsistent_states
        assert f_closed(lts, inconsistent)
        for subset in powerset([state.id for state in lts.states]):
            if f_closed(lts, subset):
                assert inconsistent <= frozenset(subset)


@st.composite
def refining_chains(draw):
    p, x, y = draw(processes(depth=2)), draw(processes(depth=2)), draw(processes(depth=2))
    first = draw(st.sampled_from([p, Conj(p, x), x]))
    last = draw(st.sampled_from([p, Disj(p, y), y]))
    return first, p, last


class TestPreorder:
    @relaxed(150)
    @given(processes(depth=3))
    def test_reflexive(self, p):
        with within_bound():
            assert refines(p, p).holds

    @relaxed(150)
    @given(refining_chains())
    def test_transitive(self, chain):
        p, q, r = chain
        with within_bound():
            if refines(p, q).holds and refines(q, r).holds:
                assert refines(p, r).holds

    @relaxed(100)
    @given(processes(depth=3), processes(depth=3))
    def test_stable_preorder_is_a_fixpoint(self, p, q):
        with within_bound():
            left, right = build_lts(p), build_lts(q)
            relation = stable_rs(left, right)
            assert stable_rs(left, right, seeds=relation.pairs).pairs == relation.pairs


class TestUpToSoundness:
    @relaxed(150)
    @given(st.one_of(refining_pairs(), st.tuples(processes(depth=3), processes(depth=3))), st.booleans())
    def test_upto_relations_refine(self, pair, with_witness):
        with within_bound():
            relation, left, right = place_relation([pair])
            pairs = set(relation.pairs)
            (root,) = pairs
            if with_witness:
                verdict = refines_alt_graphs(left, root[0], right, root[1])
                if verdict.holds:
                    pairs |= verdict.witness.pairs
            if check_upto(pairs, left, right):
                for x, y in pairs:
                    assert refines_graphs(left, x, right, y).holds


class TestDeterminism:
    @relaxed(100)
    @given(processes(depth=3))
    def test_graph_construction(self, p):
        with within_bound():
            assert to_dict(build_lts(p)) == to_dict(build_lts(p))

    @relaxed(100)
    @given(formulas(depth=3))
    def test_encoding(self, formula):
        assert encode(formula, ACTIONS) == encode(formula, ACTIONS)


class TestConjunctionOfFormulas:
    @relaxed(100)
    @given(processes(depth=3), formulas(depth=2), formulas(depth=2))
    def test_direct(self, p, f, g):
        with within_bound():
            assert sat_direct(p, And(f, g), ACTIONS) == (sat_direct(p, f, ACTIONS) and sat_direct(p, g, ACTIONS))

    @relaxed(100)
    @given(processes(depth=3), formulas(depth=2), formulas(depth=2))
    def test_refine(self, p, f, g):
        with within_bound():
            assert sat_refine(p, And(f, g), ACTIONS) == (sat_refine(p, f, ACTIONS) and sat_refine(p, g, ACTIONS))
