import os
import random
import tempfile
import unittest
import zipfile

from logic_workbench import models
from logic_workbench import scatqe
from logic_workbench import suite
from logic_workbench import syntax


class TestReports(unittest.TestCase):

    def test_text(self):
        report = suite.CheckReport('km', False, 3, ('evens, n=0: None',))
        self.assertEqual(report.status, 'FAIL')
        self.assertEqual(report.text(), 'FAIL km (3 checked)\n  evens, n=0: None')
        self.assertEqual(suite.CheckReport('km', None, 0).status, 'UNKNOWN')

    def test_undecided(self):
        report = suite._report('sigma-q', [], 2, unknown=['after 5 structures'])
        self.assertEqual(report.status, 'UNKNOWN')
        self.assertEqual(report.lines, ('undecided: after 5 structures',))
        self.assertFalse(suite._report('sigma-q', ['x'], 2, unknown=['y']).passed)

    def test_json(self):
        report = suite.CheckReport('km', True, 6)
        self.assertEqual(report.to_json(), {'name': 'km', 'status': 'PASS', 'checked': 6, 'lines': []})


class TestGenerators(unittest.TestCase):

    def test_true_sigma(self):
        numbers = models.NaturalNumbers(witness_bound=20)
        rng = random.Random(3)
        for witness in range(4):
            sentence = suite.true_sigma(rng, witness)
            self.assertEqual(syntax.classify(sentence), syntax.Purity.ONE_SIGMA1)
            self.assertTrue(models.satisfies(numbers, sentence))

    def test_random_formula_scope(self):
        rng = random.Random(0)
        for _ in range(20):
            formula = suite.random_formula(rng, (('<', 2),), ('x', 'y'), quantifiers=2)
            self.assertLessEqual(formula.free_variables, {'x', 'y'})

    def test_scat_assignments(self):
        structure = models.scat_model(3)
        rng = random.Random(0)
        separate = scatqe.VarEquivalence.parse('x;y')
        listed, complete = suite.scat_assignments(structure, separate, rng, 4)
        self.assertTrue(complete)
        # pairs of elements from two distinct classes among sizes 1, 2 and 3
        self.assertEqual(len(listed), 22)
        self.assertEqual(len({tuple(sorted(assignment.items())) for assignment in listed}), 22)
        self.assertTrue(all(models.evaluate(structure, separate.guard_formula(), a) for a in listed))
        self.assertEqual(len(suite.scat_assignments(structure, scatqe.VarEquivalence.parse('x=y'), rng, 4)[0]), 14)
        self.assertEqual(len(suite.scat_assignments(structure, separate, rng, 4, variables={'x'})[0]), 6)
        self.assertEqual(suite.scat_assignments(models.scat_model(2), scatqe.VarEquivalence.parse('x;y;z'), rng, 4),
                         ([], True))

    def test_sampled_scat_assignments(self):
        structure = models.scat_model(3)
        listed, complete = suite.scat_assignments(structure, scatqe.VarEquivalence.parse('x=y;z'), random.Random(0), 4)
        self.assertFalse(complete)
        self.assertEqual(len(listed), 4)
        for assignment in listed:
            x, y, z = (structure.labels[assignment[var]].n for var in ('x', 'y', 'z'))
            self.assertEqual(x, y)
            self.assertNotEqual(x, z)

    def test_order_structure(self):
        order = suite.order_structure(3)
        self.assertEqual(order.size, 3)
        self.assertEqual(order.relations['<'], frozenset({(0, 1), (0, 2), (1, 2)}))


class TestChecks(unittest.TestCase):

    def test_tn_soundness(self):
        report = suite.run_check('tn-soundness', max_z=4)
        self.assertTrue(report.passed, report.lines)
        self.assertEqual(report.checked, 5)

    def test_false_sigma_theories_have_no_small_models(self):
        report = suite.run_check('sigma-q', true_count=0, false_count=3, max_size=2)
        self.assertEqual(report.status, 'PASS', report.lines)
        self.assertEqual(report.lines, ('9 partial structures of size at most 2 examined',))

    def test_witness_comparison_small(self):
        report = suite.run_check('witness-comparison', pairs=2, max_size=2)
        self.assertEqual(report.status, 'PASS', report.lines)
        self.assertTrue(report.lines[0].endswith('examined'))

    def test_scat_qe_on_every_assignment(self):
        report = suite.run_check('scat-qe', formulas=2, depth=1, max_vars=1)
        self.assertEqual(report.status, 'PASS', report.lines)
        self.assertEqual(report.checked, 2)
        note = '2 of 2 equivalences checked on every assignment, the others on 6 sampled ones'
        self.assertEqual(report.lines, (note,))

    def test_km(self):
        report = suite.run_check('km', ns=range(2), fuel=1000)
        self.assertEqual(report.status, 'PASS', report.lines)
        self.assertEqual(report.checked, 6)

    def test_unknown_check(self):
        self.assertRaises(ValueError, suite.run_check, 'nope')


class TestArchive(unittest.TestCase):

    def test_write_archive(self):
        reports = [suite.CheckReport('km', True, 6)]
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'report.zip')
            suite.write_archive(reports, path)
            with zipfile.ZipFile(path) as archive:
                self.assertEqual(archive.namelist(), ['01-km.txt', 'summary.txt'])
                self.assertEqual(archive.read('01-km.txt').decode('utf-8'), 'PASS km (6 checked)\n')
                self.assertEqual(archive.read('summary.txt').decode('utf-8'), suite.summary(reports))
