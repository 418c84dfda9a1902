import unittest

from hypothesis import given

from logic_workbench import parsing
from logic_workbench import syntax

from .utils import fast_settings, pure_formulas


class TestParse(unittest.TestCase):

    def test_quantifiers(self):
        self.assertEqual(
            parsing.parse('A x. E y <= x. y < x'),
            syntax.Forall('x', syntax.BExists('y', 'x', False, syntax.Atom('<', ('y', 'x')))),
        )

    def test_precedence(self):
        a, b, c = (syntax.Atom('<', ('x', v)) for v in 'abc')
        self.assertEqual(parsing.parse('x < a | x < b & x < c'), syntax.Or(a, syntax.And(b, c)))
        self.assertEqual(parsing.parse('x < a -> x < b -> x < c'), syntax.Implies(a, syntax.Implies(b, c)))
        self.assertEqual(parsing.parse('~x < a & x < b'), syntax.And(syntax.Not(a), b))

    def test_zero_equation_is_the_zero_atom(self):
        self.assertEqual(parsing.parse('0 = x'), syntax.Atom('Z', ('x',)))
        self.assertEqual(parsing.parse('x = 0'), syntax.Atom('=', ('x', syntax.ZERO)))

    def test_graph_atoms(self):
        self.assertEqual(parsing.parse('S x = y'), syntax.Atom('S', ('x', 'y')))
        self.assertEqual(parsing.parse('M x y z'), syntax.Atom('M', ('x', 'y', 'z')))
        self.assertEqual(parsing.parse('A[x, S(y), z]'), syntax.Atom('A', ('x', syntax.App('S', ('y',)), 'z')))

    def test_relations(self):
        self.assertEqual(parsing.parse('E(x, y)'), syntax.Atom('E', ('x', 'y')))
        self.assertEqual(parsing.parse('P'), syntax.Atom('P', ()))
        self.assertEqual(parsing.parse('R(x, F(y))'), syntax.Atom('R', ('x', syntax.App('F', ('y',)))))
        self.assertEqual(parsing.parse('top & bot'), syntax.And(syntax.TOP, syntax.BOT))

    def test_terms(self):
        self.assertEqual(parsing.parse_term('(x * S(0))'), syntax.App('M', ('x', syntax.num(1))))
        self.assertEqual(parsing.parse_term('0'), syntax.ZERO)

    def test_syntax_error_position(self):
        with self.assertRaises(parsing.FormulaSyntaxError) as context:
            parsing.parse('A x. (x < y')
        self.assertIsNotNone(context.exception.line)
        self.assertRaises(parsing.FormulaSyntaxError, parsing.parse, 'x <')
        self.assertRaises(ValueError, parsing.parse, 'E x < x. top')


class TestPrint(unittest.TestCase):

    @fast_settings
    @given(pure_formulas(max_leaves=8))
    def test_printed_formulas_parse_back(self, formula):
        self.assertEqual(parsing.parse(parsing.print_formula(formula)), formula)

    def test_theory_texts(self):
        formula = parsing.parse('A x. A y. (x * S(y)) = ((x * y) + x)')
        self.assertEqual(parsing.parse(parsing.print_formula(formula)), formula)
