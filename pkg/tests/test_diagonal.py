import random
import unittest

from logic_workbench import diagonal
from logic_workbench import godel
from logic_workbench import models
from logic_workbench import parsing
from logic_workbench import syntax


class TestSub(unittest.TestCase):

    def test_plug(self):
        numbers = models.NaturalNumbers(witness_bound=10)
        plugged = diagonal.plug(parsing.parse('x < y'), 'x', 3)
        self.assertEqual(plugged.free_variables, {'y'})
        self.assertTrue(models.evaluate(numbers, plugged, {'y': 5}))

    def test_plug_outside_sigma1(self):
        formula = parsing.parse('A y. ~y < x')
        structure = models.cutoff_model(5)
        self.assertTrue(models.satisfies(structure, diagonal.plug(formula, 'x', 0)))
        self.assertFalse(models.satisfies(structure, diagonal.plug(formula, 'x', 2)))

    def test_sub_plugs_into_one_variable_formulas(self):
        numbers = models.NaturalNumbers(witness_bound=10)
        code = godel.encode1(parsing.parse('E u. u < w'), var='w', signature=diagonal.SIGNATURE)
        self.assertTrue(models.satisfies(numbers, godel.decode(diagonal.sub(code, 3), diagonal.SIGNATURE)))
        self.assertFalse(models.satisfies(numbers, godel.decode(diagonal.sub(code, 0), diagonal.SIGNATURE)))
        self.assertEqual(godel.encode(diagonal.sub_sentence(code, 3), diagonal.SIGNATURE), diagonal.sub(code, 3))

    def test_table_formula(self):
        table = diagonal.table_formula([(1, 2), (0, 0)], ('a', 'b'))
        self.assertTrue(syntax.is_pure_delta0(table))
        numbers = models.NaturalNumbers()
        self.assertTrue(models.evaluate(numbers, table, {'a': 1, 'b': 2}))
        self.assertTrue(models.evaluate(numbers, table, {'a': 0, 'b': 0}))
        self.assertFalse(models.evaluate(numbers, table, {'a': 1, 'b': 0}))
        self.assertEqual(diagonal.table_formula([], ('a',)), syntax.BOT)

    def test_nu_matches_sub(self):
        checks = diagonal.check_nu(2)
        self.assertEqual(len(checks), 4)
        self.assertTrue(all(check.passed for check in checks), checks)
        self.assertEqual([(check.x, check.y) for check in checks], [(0, 0), (0, 1), (1, 0), (1, 1)])

    def test_nu_on_sampled_pairs(self):
        checks = diagonal.check_nu(3, samples=5, rng=random.Random(1))
        pairs = [(check.x, check.y) for check in checks]
        self.assertEqual(len(set(pairs)), 5)
        self.assertEqual(pairs, sorted(pairs))
        self.assertTrue(all(check.passed for check in checks), checks)
        self.assertEqual(len(diagonal.check_nu(2, samples=10)), 4)


class TestCodedStructure(unittest.TestCase):

    def test_sub_graph(self):
        coded = diagonal.CodedStructure(models.NaturalNumbers(witness_bound=3))
        code = godel.encode1(parsing.parse('E u. u < w'), var='w', signature=diagonal.SIGNATURE)
        value = diagonal.sub(code, 3)
        self.assertTrue(coded.holds('Sub', (code, 3, value)))
        self.assertFalse(coded.holds('Sub', (code, 3, value + 1)))
        self.assertEqual(coded.graph_candidates('Sub', (code, 3)), frozenset([value]))
        self.assertTrue(coded.holds('<', (0, 1)))
        formula = syntax.Exists('z', syntax.Atom('Sub', ('x', 'y', 'z')))
        self.assertTrue(models.evaluate(coded, formula, {'x': code, 'y': 3}))

    def test_neg_graph(self):
        # 0 codes bot and 2 codes ~bot
        coded = diagonal.CodedStructure(models.cutoff_model(2))
        self.assertEqual(coded.output('Neg', (0,)), 2)
        self.assertTrue(coded.holds('Neg', (0, 2)))
        self.assertEqual(coded.graph_candidates('Neg', (0,)), frozenset([2]))
        self.assertEqual(coded.graph_candidates('Sub', (0, 0)), frozenset())
        self.assertEqual(coded.name, 'N_2')
        doubled = diagonal.CodedStructure(models.cutoff_model(2), transform=syntax.Not)
        expected = godel.encode(syntax.Not(syntax.Not(syntax.BOT)), diagonal.SIGNATURE)
        self.assertEqual(doubled.output('Neg', (0,)), expected)


class TestToyTheories(unittest.TestCase):

    def test_listings(self):
        self.assertEqual(diagonal.theory_listing(2, 3), [1, 2, 7])
        self.assertEqual(diagonal.refuted_listing(2, 3), [0, 3, 4])
        self.assertEqual(diagonal.theory_table(1, 2), [(0, 0, 1), (0, 1, 2)])

    def test_pi_formula(self):
        pi = diagonal.pi_formula(1, 2)
        self.assertLessEqual(pi.free_variables, set(diagonal.PI_NAMES))
        numbers = models.NaturalNumbers()
        self.assertTrue(models.evaluate(numbers, pi, {'i': 0, 'p': 1, 'f': 2}))
        self.assertFalse(models.evaluate(numbers, pi, {'i': 0, 'p': 0, 'f': 2}))

    def test_triangle(self):
        pi = diagonal.pi_formula(1, 2)
        numbers = models.NaturalNumbers(witness_bound=8)
        self.assertTrue(models.satisfies(numbers, diagonal.triangle(pi, syntax.TOP)))
        self.assertFalse(models.satisfies(numbers, diagonal.triangle(pi, syntax.BOT)))
        self.assertRaises(ValueError, diagonal.triangle, parsing.parse('q < i'), syntax.TOP)

    def test_triangle_formula(self):
        pi = diagonal.pi_formula(1, 2)
        opened = diagonal.triangle_formula(pi)
        self.assertEqual(opened.free_variables, {'f'})
        numbers = models.NaturalNumbers(witness_bound=3)
        self.assertTrue(models.evaluate(numbers, opened, {'f': 2}))
        self.assertFalse(models.evaluate(numbers, opened, {'f': 3}))


class TestFixedPoints(unittest.TestCase):

    def test_construction(self):
        point = diagonal.fixed_point(syntax.BOT)
        self.assertEqual(point.certificate.kind, syntax.Purity.ONE_SIGMA1)
        self.assertTrue(syntax.is_sentence(point.sentence))
        self.assertEqual(point.template_code, godel.encode1(point.template, var='v', signature=diagonal.SIGNATURE))
        self.assertEqual(point.template.free_variables, {'v'})
        code = godel.encode(point.sentence, diagonal.SIGNATURE)
        self.assertEqual(code, diagonal.sub(point.template_code, point.template_code))

    def test_check(self):
        point = diagonal.fixed_point(syntax.BOT)
        check = diagonal.check_fixed_point(point, syntax.BOT, count=2, witness_bound=3)
        self.assertIs(check.sentence_value, False)
        self.assertIs(check.triangle_value, False)
        self.assertTrue(check.agree)
        self.assertEqual(len(check.consistent_with), 2)

    def test_pi_listing_every_code(self):
        point = diagonal.fixed_point(syntax.TOP)
        check = diagonal.check_fixed_point(point, syntax.TOP, witness_bound=3)
        self.assertIs(check.sentence_value, True)
        self.assertIs(check.triangle_value, True)

    def test_pi_listing_large_codes(self):
        pi = syntax.less('i', 'f')
        check = diagonal.check_fixed_point(diagonal.fixed_point(pi), pi, witness_bound=3)
        self.assertIs(check.sentence_value, True)
        self.assertIs(check.triangle_value, True)

    def test_toy_theory(self):
        pi = diagonal.pi_formula(1, 1)
        check = diagonal.check_fixed_point(diagonal.fixed_point(pi), pi, count=1, witness_bound=3)
        self.assertIs(check.sentence_value, False)
        self.assertIs(check.triangle_value, False)

    def test_stray_variables(self):
        self.assertRaises(ValueError, diagonal.fixed_point, parsing.parse('q < i'))


class TestRosser(unittest.TestCase):

    def test_rho(self):
        rho = diagonal.rosser_rho(syntax.BOT, syntax.BOT)
        self.assertTrue(syntax.is_sentence(rho.sentence))
        self.assertEqual(syntax.certify(rho.sentence).kind, syntax.Purity.ONE_SIGMA1)
        alpha, beta = rho.sides
        self.assertTrue(syntax.is_sentence(alpha))
        self.assertTrue(syntax.is_sentence(beta))

    def test_rho_errors(self):
        with self.assertRaises(syntax.PurityError):
            diagonal.rosser_rho(parsing.parse('A x. x = x'), syntax.BOT)
        with self.assertRaises(ValueError):
            diagonal.rosser_rho(parsing.parse('q < x'), syntax.BOT)

    def test_demo(self):
        report = diagonal.rosser_demo(i=2, steps=2)
        self.assertEqual(report.code, godel.encode(report.rho.sentence, diagonal.SIGNATURE))
        self.assertFalse(report.in_theorems)
        self.assertFalse(report.in_refutables)
