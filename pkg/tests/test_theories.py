import unittest

from logic_workbench import limits
from logic_workbench import models
from logic_workbench import syntax
from logic_workbench import theories


class TestStreams(unittest.TestCase):

    def test_tn(self):
        tn = theories.axioms('TN')
        self.assertTrue(tn.finite)
        self.assertEqual(len(list(tn)), 10)
        self.assertEqual(tn.take(3), list(tn)[:3])
        self.assertEqual(tn.conjunction(), syntax.conjunction(theories.tn_axioms()))

    def test_r_schemes(self):
        self.assertEqual(len(list(theories.axioms('R3', 2))), 6)
        self.assertEqual(len(list(theories.axioms('R', 1))), 4 + 4 + 2 + 2 + 2)
        self.assertRaises(ValueError, theories.r3_axiom, 1, 1)
        with self.assertRaises(ValueError):
            theories.axioms('R', 2).conjunction()

    def test_r_holds_in_large_cutoffs(self):
        structure = models.cutoff_model(10)
        for axiom in theories.axioms('R', 2):
            self.assertTrue(models.satisfies(structure, axiom), syntax.to_text(axiom))

    def test_r4_instance(self):
        axiom = theories.r4_axiom(2)
        self.assertTrue(models.satisfies(models.cutoff_model(4), axiom))
        self.assertEqual(theories.r4_axiom(0), syntax.Forall('x', syntax.Implies(
            syntax.Atom('<', ('x', syntax.ZERO)), syntax.BOT)))

    def test_jan_stream(self):
        jan = theories.axioms('Jan', 2)
        self.assertEqual(jan.signature, syntax.JAN)
        self.assertEqual(len(list(jan)), 3 + 2 * 2)
        self.assertEqual(len(theories.axioms('A', 2).take(10)), 3)

    def test_scattered_streams(self):
        for name in ('PA-scat', 'PA-scat!'):
            stream = theories.axioms(name, 1)
            self.assertEqual(stream.signature, syntax.SCATTERED)
            self.assertTrue(all(syntax.is_sentence(axiom) for axiom in stream.take(2)))
        self.assertEqual(theories.n_tilde(1, 'a').free_variables, {'a'})

    def test_r_succ(self):
        stream = theories.axioms('R_succ', 2)
        self.assertEqual(stream.signature, syntax.SUCCESSOR)
        self.assertEqual(len(list(stream)), 6)

    def test_streams_restart(self):
        stream = theories.axioms('Jan', 1)
        self.assertEqual(list(stream), list(stream))

    def test_unknown_theory(self):
        with self.assertRaises(theories.UnknownTheoryError):
            theories.axioms('ZFC')
        self.assertRaises(ValueError, theories.axioms, 'R', limits.get_scheme_bound.ceiling + 1)


class TestJan(unittest.TestCase):

    def test_instance_report(self):
        report = theories.jan_instance_report(models.jan_model((1, 2)), 2)
        self.assertEqual(
            sorted(name for name, value in report.items() if not value), ['J3_2'],
        )
        self.assertEqual(len(report), 3 + 4)

    def test_two_classes_of_the_same_size(self):
        report = theories.jan_instance_report(models.jan_model((1, 1)), 1)
        self.assertFalse(report['J2_1'])
        self.assertTrue(report['J3_1'])

    def test_a_sentences(self):
        structure = models.jan_model((1, 2))
        self.assertTrue(models.satisfies(structure, theories.a_sentence(0)))
        self.assertTrue(models.satisfies(structure, theories.a_sentence(1)))
        self.assertFalse(models.satisfies(structure, theories.a_sentence(2)))

    def test_class_formulas(self):
        structure = models.jan_model((1, 3))
        exactly = theories.class_exactly('x', 3)
        self.assertFalse(models.satisfies(structure, exactly, {'x': 0}))
        self.assertTrue(models.satisfies(structure, exactly, {'x': 2}))
        self.assertEqual(theories.class_at_least('x', 0), syntax.TOP)


class TestCombine(unittest.TestCase):

    def test_ovee(self):
        tn = theories.axioms('TN')
        combined = theories.combine(tn, tn, 'ovee')
        self.assertTrue(combined.finite)
        axioms = list(combined)
        self.assertEqual(len(axioms), 20)
        self.assertIn(('P', 0), combined.signature.relations)
        self.assertIn('Lt1', combined.signature.symbols)
        self.assertEqual(axioms[0], syntax.Implies(syntax.Atom('P', ()), theories.tn_axioms()[0]))
        self.assertIsInstance(axioms[1].left, syntax.Not)
        for axiom in axioms:
            syntax.check_signature(axiom, combined.signature)

    def test_box(self):
        tn = theories.axioms('TN')
        combined = theories.combine(tn, tn, 'box')
        axioms = list(combined)
        self.assertEqual(len(axioms), 100)
        self.assertEqual(len(set(axioms)), 100)
        self.assertNotIn(('P', 0), combined.signature.relations)

    def test_scheme_bound_is_kept(self):
        combined = theories.combine(theories.axioms('R3', 2), theories.axioms('TN'), 'ovee')
        self.assertFalse(combined.finite)
        self.assertEqual(combined.bound, 2)
        self.assertEqual(len(list(combined)), 16)

    def test_errors(self):
        tn = theories.axioms('TN')
        self.assertRaises(ValueError, theories.combine, tn, tn, 'sum')
        self.assertRaises(ValueError, theories.combine, tn, tn, 'ovee', guard='S')
