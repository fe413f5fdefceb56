from django.test import SimpleTestCase
from hypothesis import given, settings

from django_cllr.exceptions import (
    DuplicateBoundVariable,
    ParseError,
    UnboundInitialVariable,
    UnguardedRecursion,
    UnknownAction,
)
from django_cllr.syntax import (
    BOT,
    NIL,
    Conj,
    Disj,
    ExtChoice,
    GuardMode,
    Par,
    Prefix,
    Rec,
    RecSpec,
    Var,
    alpha_canon,
    collect_actions,
    conj_scope_free,
    free_vars,
    guard_mode,
    is_process,
    parse_term,
    show,
    substitute,
    unfold,
)

from .strategies import terms

TWO_LOOPS_BODY = "(<Y | Y = a.Y> /\\ a.X) \\/ (<Z | Z = b.Z> /\\ b.X)"


class ParseTermTest(SimpleTestCase):
    """Test suite for parse_term()"""

    def test_prefix(self):
        """Test that a prefix of nil parses to Prefix(a, Nil)"""
        self.assertEqual(parse_term("a.0", ["a"]), Prefix("a", NIL))

    def test_recursion(self):
        """Test that a single-equation recursion parses to Rec"""
        self.assertEqual(parse_term("<X | X = a.X>", ["a"]), Rec("X", (("X", Prefix("a", Var("X"))),)))

    def test_multi_equation_recursion(self):
        term = parse_term("<X | X = a.Y, Y = b.X>")
        self.assertEqual(term.init, "X")
        self.assertEqual(term.body_of("Y"), Prefix("b", Var("X")))

    def test_precedence(self):
        """Test that /\\ binds tighter than \\/, which binds tighter than [] and |[A]|"""
        term = parse_term("a.0 |[a]| b.0 [] c.0 \\/ d.0 /\\ e.0")
        self.assertEqual(
            term,
            Par(
                frozenset({"a"}),
                Prefix("a", NIL),
                ExtChoice(Prefix("b", NIL), Disj(Prefix("c", NIL), Conj(Prefix("d", NIL), Prefix("e", NIL)))),
            ),
        )

    def test_left_associative(self):
        term = parse_term("a.0 [] b.0 [] c.0")
        self.assertEqual(term, ExtChoice(ExtChoice(Prefix("a", NIL), Prefix("b", NIL)), Prefix("c", NIL)))

    def test_bot_and_tau(self):
        self.assertEqual(parse_term("tau.bot"), Prefix("tau", BOT))

    def test_empty_synchronisation_set(self):
        self.assertEqual(parse_term("a.0 |[]| b.0").sync, frozenset())

    def test_comments_are_ignored(self):
        self.assertEqual(parse_term("# a process\na.0  # trailing"), Prefix("a", NIL))

    def test_unguarded_recursion(self):
        """Test that an unguarded occurrence under external choice is rejected"""
        with self.assertRaises(UnguardedRecursion):
            parse_term("<X | X = X [] a.0>", ["a"])

    def test_duplicate_bound_variable(self):
        with self.assertRaises(DuplicateBoundVariable):
            parse_term("<X | X = a.X, X = b.X>")

    def test_unbound_initial_variable(self):
        with self.assertRaises(UnboundInitialVariable):
            parse_term("<X | Y = a.Y>")

    def test_unknown_action(self):
        with self.assertRaises(UnknownAction):
            parse_term("c.0", ["a", "b"])

    def test_tau_needs_no_declaration(self):
        self.assertEqual(parse_term("tau.0", ["a"]), Prefix("tau", NIL))

    def test_tau_in_synchronisation_set(self):
        with self.assertRaises(ParseError):
            parse_term("a.0 |[tau]| a.0")

    def test_syntax_error_position(self):
        """Test that a ParseError reports line and column of the offending token"""
        with self.assertRaises(ParseError) as context:
            parse_term("a.0 []\n [] b.0")
        self.assertEqual(context.exception.line, 2)
        self.assertEqual(context.exception.kind, "syntax")

    def test_unexpected_end(self):
        with self.assertRaises(ParseError) as context:
            parse_term("a.")
        self.assertIn("end of input", str(context.exception))


class ShowTest(SimpleTestCase):
    """Test suite for the pretty-printer"""

    def test_minimal_parentheses(self):
        self.assertEqual(show(parse_term("(a.0 [] b.0) /\\ c.0")), "(a.0 [] b.0) /\\ c.0")
        self.assertEqual(show(parse_term("a.0 [] (b.0 /\\ c.0)")), "a.0 [] b.0 /\\ c.0")

    def test_right_nested_operand_keeps_parentheses(self):
        self.assertEqual(show(parse_term("a.0 [] (b.0 [] c.0)")), "a.0 [] (b.0 [] c.0)")

    def test_parallel(self):
        self.assertEqual(show(parse_term("a.0 |[b,a]| b.0")), "a.0 |[a,b]| b.0")

    def test_recursion(self):
        self.assertEqual(show(parse_term(TWO_LOOPS_BODY)), "<Y | Y = a.Y> /\\ a.X \\/ <Z | Z = b.Z> /\\ b.X")

    @given(terms())
    @settings(max_examples=200, deadline=None)
    def test_parse_inverts_show(self, term):
        """Test that parse_term(show(t)) gives back t"""
        self.assertEqual(parse_term(show(term)), term)


class VariablesTest(SimpleTestCase):
    """Test suite for free variables, substitution and unfolding"""

    def test_free_vars(self):
        self.assertEqual(free_vars(Var("X")), {"X"})
        self.assertEqual(free_vars(Rec("X", (("X", Prefix("a", Var("X"))),))), frozenset())
        term = ExtChoice(Var("X"), Rec("Y", (("Y", Prefix("a", Var("X"))),)))
        self.assertEqual(free_vars(term), {"X"})

    def test_is_process(self):
        self.assertTrue(is_process(parse_term("<X | X = a.X>")))
        self.assertFalse(is_process(parse_term("a.X")))

    def test_substitute_variable(self):
        self.assertEqual(substitute(Var("X"), {"X": NIL}), NIL)

    def test_substitute_under_binder(self):
        """Test that substitution reaches free occurrences inside a recursion"""
        canonical = parse_term("<X | X = a.X>")
        term = ExtChoice(Var("X"), Prefix("a", Rec("Y", (("Y", ExtChoice(Var("X"), Var("Y"))),))))
        expected = ExtChoice(canonical, Prefix("a", Rec("Y", (("Y", ExtChoice(canonical, Var("Y"))),))))
        self.assertEqual(substitute(term, {"X": canonical}), expected)

    def test_substitute_bound_variable_is_noop(self):
        term = parse_term("<X | X = a.X>")
        self.assertIs(substitute(term, {"X": NIL}), term)

    def test_substitute_avoids_capture(self):
        """Test that a bound variable is renamed when it would capture a free one"""
        term = Rec("Y", (("Y", Prefix("a", ExtChoice(Var("X"), Var("Y")))),))
        result = substitute(term, {"X": Var("Y")})
        self.assertEqual(free_vars(result), {"Y"})
        self.assertNotEqual(result.init, "Y")

    def test_simultaneous_substitution(self):
        term = parse_term("a.X [] b.Y")
        result = substitute(term, {"X": Var("Y"), "Y": Var("X")})
        self.assertEqual(result, parse_term("a.Y [] b.X"))

    def test_unfold(self):
        rec = parse_term("<X | X = a.Y, Y = b.X>")
        self.assertEqual(unfold(rec), Prefix("a", Rec("Y", rec.bindings)))

    def test_rec_spec(self):
        spec = RecSpec.from_mapping({"X": parse_term("a.X")}, "X")
        self.assertEqual(spec.as_term(), parse_term("<X | X = a.X>"))


class TermNodeTest(SimpleTestCase):
    def test_equal_terms_share_hash(self):
        first = parse_term("<X | X = a.X [] (b.0 \\/ c.X)>")
        second = parse_term("<X | X = a.X [] (b.0 \\/ c.X)>")
        self.assertIsNot(first, second)
        self.assertEqual(first, second)
        self.assertEqual(hash(first), hash(second))
        self.assertEqual(len({first, second}), 1)

    def test_node_type_is_part_of_identity(self):
        self.assertNotEqual(Conj(NIL, BOT), Disj(NIL, BOT))
        self.assertNotEqual(Prefix("a", NIL), Prefix("b", NIL))

    def test_hash_is_stored_on_the_node(self):
        term = Prefix("a", Var("X"))
        value = hash(term)
        self.assertEqual(term.__dict__["_hash"], value)
        self.assertEqual(hash(term), value)


class AlphaCanonTest(SimpleTestCase):
    """Test suite for alpha_canon()"""

    def test_alpha_equivalent_terms(self):
        self.assertEqual(alpha_canon(parse_term("<X | X = a.X>")), alpha_canon(parse_term("<Y | Y = a.Y>")))

    def test_no_binders(self):
        self.assertEqual(alpha_canon(parse_term("a.0")), parse_term("a.0"))

    def test_different_bodies(self):
        self.assertNotEqual(alpha_canon(parse_term("<X | X = a.X>")), alpha_canon(parse_term("<X | X = b.X>")))

    def test_equation_order_is_irrelevant(self):
        pairs = [
            ("<X | X = a.Y, Y = b.X>", "<P | Q = b.P, P = a.Q>"),
            ("<X | X = a.X, Y = b.0, Z = c.0>", "<X | X = a.X, Z = c.0, Y = b.0>"),
            ("<X | X = a.X, Y = b.Z, Z = c.Y>", "<U | W = c.V, U = a.U, V = b.W>"),
        ]
        for first, second in pairs:
            with self.subTest(first=first):
                self.assertEqual(alpha_canon(parse_term(first)), alpha_canon(parse_term(second)))

    def test_closed_recursion_numbered_from_zero(self):
        term = parse_term("<Y | Y = c.<Z | Z = d.Z>> [] a.<W | W = b.W>")
        self.assertEqual(show(alpha_canon(term)), "<X0 | X0 = c.<X0 | X0 = d.X0>> [] a.<X0 | X0 = b.X0>")

    def test_free_variables_keep_names(self):
        term = parse_term("<X0 | X0 = a.X1>")
        self.assertEqual(free_vars(alpha_canon(term)), {"X1"})

    @given(terms())
    @settings(max_examples=100, deadline=None)
    def test_idempotent(self, term):
        self.assertEqual(alpha_canon(alpha_canon(term)), alpha_canon(term))


class GuardednessTest(SimpleTestCase):
    """Test suite for guard_mode() and conj_scope_free()"""

    def test_strong(self):
        self.assertEqual(guard_mode(parse_term("a.X"), "X"), GuardMode.STRONG)

    def test_weak(self):
        self.assertEqual(guard_mode(parse_term("tau.X \\/ a.X"), "X"), GuardMode.WEAK)

    def test_unguarded(self):
        self.assertEqual(guard_mode(parse_term("X [] a.X"), "X"), GuardMode.UNGUARDED)

    def test_visible_prefix_below_tau_is_strong(self):
        self.assertEqual(guard_mode(parse_term("tau.a.X"), "X"), GuardMode.STRONG)

    def test_absent_variable_is_strong(self):
        self.assertEqual(guard_mode(parse_term("a.0"), "X"), GuardMode.STRONG)

    def test_rebinding_hides_occurrences(self):
        self.assertEqual(guard_mode(parse_term("<X | X = a.X>"), "X"), GuardMode.STRONG)

    def test_label(self):
        self.assertEqual(GuardMode.WEAK.label, "weak")

    def test_conj_scope_free(self):
        self.assertTrue(conj_scope_free(parse_term("a.X"), "X"))
        self.assertFalse(conj_scope_free(parse_term(TWO_LOOPS_BODY), "X"))
        self.assertTrue(conj_scope_free(parse_term("b.0 /\\ a.0"), "X"))


class CollectActionsTest(SimpleTestCase):
    def test_first_appearance_order(self):
        self.assertEqual(collect_actions(parse_term("b.a.0 [] tau.c.0 [] a.0")), ["b", "a", "c"])

    def test_synchronisation_set_counts(self):
        self.assertEqual(collect_actions(parse_term("0 |[d]| 0")), ["d"])
