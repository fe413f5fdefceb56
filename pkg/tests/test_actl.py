from django.test import SimpleTestCase, override_settings

from django_cllr.actl import (
    FF,
    TT,
    Always,
    Box,
    Dis,
    En,
    WeakUntil,
    box_a,
    check,
    encode,
    formula_lts,
    gen_fold,
    parse_actl,
    sat_direct,
    sat_refine,
    show_formula,
    subsets,
    tt_process,
)
from django_cllr.exceptions import (
    AlphabetTooLarge,
    EmptyAlphabet,
    EmptyConjunction,
    EmptyDisjunction,
    ParseError,
    UnknownAction,
)
from django_cllr.refinement import refines
from django_cllr.syntax import BOT, NIL, Conj, Disj, ExtChoice, Prefix, Rec, parse_term, show


def disjuncts(term):
    if isinstance(term, Disj):
        return disjuncts(term.left) + disjuncts(term.right)
    return [term]


class ParseActlTest(SimpleTestCase):
    """Test suite for parse_actl()"""

    def test_atom(self):
        self.assertEqual(parse_actl("en(a)", ["a"]), En("a"))

    def test_precedence(self):
        self.assertEqual(parse_actl("[a] dis(b) W ff", ["a", "b"]), WeakUntil(Box("a", Dis("b")), FF()))

    def test_always_binds_tighter_than_and(self):
        formula = parse_actl("A tt /\\ en(a)", ["a"])
        self.assertEqual(show_formula(formula), "A tt /\\ en(a)")
        self.assertIsInstance(formula.left, Always)

    def test_unknown_action(self):
        with self.assertRaises(UnknownAction):
            parse_actl("en(c)", ["a", "b"])

    def test_empty_alphabet(self):
        with self.assertRaises(EmptyAlphabet):
            parse_actl("tt", [])

    def test_unchecked_without_alphabet(self):
        self.assertEqual(parse_actl("dis(z)"), Dis("z"))

    def test_silent_action_rejected(self):
        for text, alphabet in [("en(tau)", None), ("[tau] tt", ["a"]), ("A dis(tau) W en(a)", ["a", "tau"])]:
            with self.subTest(text=text, alphabet=alphabet):
                with self.assertRaises(UnknownAction) as caught:
                    parse_actl(text, alphabet)
                self.assertEqual(caught.exception.action, "tau")

    def test_syntax_error(self):
        with self.assertRaises(ParseError):
            parse_actl("en(a) W", ["a"])

    def test_show_round_trip(self):
        for text in ["(tt W ff) W tt", "[a] (en(a) \\/ dis(b))", "A A tt", "ff \\/ tt /\\ en(b)"]:
            with self.subTest(formula=text):
                formula = parse_actl(text, ["a", "b"])
                self.assertEqual(parse_actl(show_formula(formula), ["a", "b"]), formula)


class FoldTest(SimpleTestCase):
    """Test suite for gen_fold() and subsets()"""

    def test_empty_choice_is_nil(self):
        self.assertEqual(gen_fold(ExtChoice, []), NIL)

    def test_left_nested(self):
        items = [parse_term("a.0"), parse_term("b.0"), parse_term("c.0")]
        self.assertEqual(gen_fold(ExtChoice, items), parse_term("(a.0 [] b.0) [] c.0"))

    def test_empty_disjunction_and_conjunction(self):
        with self.assertRaises(EmptyDisjunction):
            gen_fold(Disj, [])
        with self.assertRaises(EmptyConjunction):
            gen_fold(Conj, [])

    def test_subsets_in_bitmask_order(self):
        self.assertEqual(list(subsets(["a", "b"])), [[], ["a"], ["b"], ["a", "b"]])


class EncodeTest(SimpleTestCase):
    """Test suite for box_a() and encode()"""

    def test_box_single_action(self):
        self.assertEqual(box_a("a", NIL, ["a"]), Disj(Prefix("a", NIL), NIL))

    def test_box_disjunct_count(self):
        self.assertEqual(len(disjuncts(box_a("a", NIL, ["a", "b"]))), 4)

    def test_box_unknown_action(self):
        with self.assertRaises(UnknownAction):
            box_a("c", NIL, ["a", "b"])

    def test_ff(self):
        self.assertEqual(encode(FF(), ["a"]), BOT)

    def test_tt(self):
        self.assertEqual(show(encode(TT(), ["a"])), "<X | X = 0 \\/ a.X>")
        self.assertEqual(tt_process(["a"]), parse_term("<X | X = 0 \\/ a.X>"))

    def test_enabled(self):
        self.assertEqual(encode(En("a"), ["a"]), Prefix("a", tt_process(["a"])))

    def test_ready_disjunct_counts(self):
        alphabet = ["a", "b", "c"]
        self.assertEqual(len(disjuncts(encode(En("a"), alphabet))), 4)
        self.assertEqual(len(disjuncts(encode(Dis("a"), alphabet))), 4)

    def test_fresh_recursion_variables(self):
        term = encode(WeakUntil(Always(TT()), FF()), ["a"])
        self.assertIsInstance(term, Rec)
        self.assertEqual(term.init, "X1")
        self.assertIn("<X2 |", show(term))

    def test_alphabet_checks(self):
        with self.assertRaises(EmptyAlphabet):
            encode(TT(), [])
        with self.assertRaises(AlphabetTooLarge):
            encode(TT(), ["a", "b", "c", "d", "e"])

    @override_settings(CLLR={"ALPHABET_CAP": 1})
    def test_cap_from_settings(self):
        with self.assertRaises(AlphabetTooLarge):
            encode(TT(), ["a", "b"])

    def test_tt_is_consistent_and_refined_by_consistent_processes(self):
        top = encode(TT(), ["a", "b"])
        self.assertTrue(refines(parse_term("a.(b.0 \\/ a.0)"), top).holds)
        self.assertFalse(refines(top, parse_term("bot")).holds)


class SatisfactionTest(SimpleTestCase):
    """Test suite for sat_direct(), sat_refine() and check()"""

    alphabet = ["a", "b"]

    def assertSatisfies(self, process, formula, expected):
        term, parsed = parse_term(process), parse_actl(formula, self.alphabet)
        self.assertEqual(sat_direct(term, parsed, self.alphabet), expected, "direct")
        self.assertEqual(sat_refine(term, parsed, self.alphabet), expected, "refine")

    def test_tt(self):
        self.assertSatisfies("0", "tt", True)

    def test_enabled(self):
        self.assertSatisfies("a.0", "en(a)", True)
        self.assertSatisfies("0", "en(a)", False)

    def test_bot_satisfies_ff(self):
        self.assertSatisfies("bot", "ff", True)
        self.assertSatisfies("0", "ff", False)

    def test_disjunction_is_per_stable_state(self):
        self.assertSatisfies("a.0 \\/ b.0", "en(a) \\/ en(b)", True)
        self.assertSatisfies("a.0 \\/ b.0", "en(a)", False)

    def test_box(self):
        self.assertSatisfies("a.b.0", "[a] en(b)", True)
        self.assertSatisfies("a.b.0 [] b.0", "[b] en(b)", False)

    def test_always(self):
        self.assertSatisfies("<X | X = a.X>", "A en(a)", True)
        self.assertSatisfies("<X | X = a.b.X>", "A en(a)", False)

    def test_weak_until(self):
        self.assertSatisfies("<X | X = a.X>", "en(a) W ff", True)
        self.assertSatisfies("a.a.b.0", "en(a) W en(b)", True)
        self.assertSatisfies("a.0", "en(a) W en(b)", False)

    def test_encoding_graph_is_reused(self):
        formula = parse_actl("A (en(a) W dis(b))", self.alphabet)
        formula_lts.cache_clear()
        self.assertSatisfies("<X | X = a.X>", "A (en(a) W dis(b))", True)
        self.assertSatisfies("<X | X = a.X [] b.0>", "A (en(a) W dis(b))", False)
        self.assertEqual(formula_lts.cache_info().misses, 1)
        graph = formula_lts(formula, ("a", "b"), 2000, True)
        self.assertEqual(graph.alphabet, ("a", "b"))

    @override_settings(CLLR={"STATE_BOUND": 2000, "CONJUNCTION_NORMAL_FORM": False})
    def test_encoding_graph_follows_settings(self):
        formula_lts.cache_clear()
        self.assertSatisfies("a.0", "en(a)", True)
        self.assertEqual(formula_lts.cache_info().currsize, 1)
        self.assertIsNotNone(formula_lts(En("a"), ("a", "b"), 2000, False))
        self.assertEqual(formula_lts.cache_info().hits, 1)

    def test_check_both(self):
        verdict = check(parse_term("a.0"), En("a"), self.alphabet)
        self.assertTrue(verdict.holds)
        self.assertTrue(verdict.agree)
        self.assertEqual(verdict.to_dict(), {"holds": True, "direct": True, "refine": True, "agree": True})

    def test_check_single_method(self):
        verdict = check(parse_term("0"), En("a"), self.alphabet, method="direct")
        self.assertFalse(verdict.holds)
        self.assertIsNone(verdict.refine)
        self.assertIsNone(verdict.agree)

    def test_unknown_method(self):
        with self.assertRaises(ValueError):
            check(parse_term("0"), TT(), self.alphabet, method="guess")
