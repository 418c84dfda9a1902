import json
import os
import tempfile
import unittest

from hypothesis import given

from logic_workbench import models
from logic_workbench import parsing
from logic_workbench import syntax
from logic_workbench import theories
from logic_workbench import translations

from .utils import closed_formulas, fast_settings


def jan_quotient_data(congruence):
    return {
        'source': 'jan',
        'target': 'jan',
        'defs': {'E': 'E(x0, x1)'},
        'congruence': congruence,
        'name': 'quotient',
    }


class TestTranslation(unittest.TestCase):

    def test_validation(self):
        with self.assertRaises(translations.TranslationError):
            translations.Translation(syntax.JAN, syntax.JAN)
        with self.assertRaises(translations.TranslationError):
            translations.Translation(syntax.JAN, syntax.JAN, defs={'E': syntax.Atom('E', ('x0', 'y'))})
        with self.assertRaises(translations.TranslationError):
            translations.Translation(syntax.JAN, syntax.JAN, dimension=0, defs={'E': syntax.TOP})

    def test_identity(self):
        identity = translations.identity(syntax.JAN)
        structure = models.jan_model((1, 2))
        for text in ('A x. E(x, x)', 'E x. E y. (~x = y & E(x, y))', 'A x. A y. E(x, y)'):
            formula = parsing.parse(text)
            self.assertEqual(
                models.satisfies(structure, translations.apply(identity, formula)),
                models.satisfies(structure, formula),
            )

    def test_parameters_cannot_be_free(self):
        with self.assertRaises(translations.TranslationError):
            translations.apply(translations.cutoff_translation('z'), parsing.parse('x < z'))


class TestCutoffTranslation(unittest.TestCase):

    def test_internal_model(self):
        inner = translations.internal_model(models.cutoff_model(6), translations.cutoff_translation('z'), (3,))
        self.assertTrue(models.is_isomorphic(inner, models.cutoff_model(3)))

    def test_function_terms(self):
        translated = translations.apply(translations.cutoff_translation('z'), parsing.parse('E x. S(x) = x'))
        self.assertTrue(models.evaluate(models.cutoff_model(6), translated, {'z': 3}))
        unbounded = translations.apply(translations.cutoff_translation('z'), parsing.parse('A x. E y. x < y'))
        self.assertFalse(models.evaluate(models.cutoff_model(6), unbounded, {'z': 3}))

    @fast_settings
    @given(closed_formulas())
    def test_translation_reads_the_cutoff(self, sentence):
        translated = translations.apply(translations.cutoff_translation('z'), sentence)
        self.assertEqual(
            models.evaluate(models.cutoff_model(5), translated, {'z': 2}),
            models.evaluate(models.cutoff_model(2), sentence),
        )

    def test_tn_at(self):
        formula = translations.tn_at('z')
        self.assertEqual(formula.free_variables, {'z'})
        self.assertTrue(models.evaluate(models.cutoff_model(3), formula, {'z': 2}))


class TestCombinations(unittest.TestCase):

    def test_compose_with_identity(self):
        composed = translations.compose(
            translations.cutoff_translation('z'), translations.identity(syntax.RELATIONAL_ARITHMETIC),
        )
        self.assertEqual(composed.params, ('z',))
        self.assertEqual(composed.domain_bound, ('z', False))
        inner = translations.internal_model(models.cutoff_model(5), composed, (2,))
        self.assertTrue(models.is_isomorphic(inner, models.cutoff_model(2)))

    def test_compose_errors(self):
        with self.assertRaises(translations.TranslationError):
            translations.compose(translations.identity(syntax.JAN), translations.identity(syntax.RELATIONAL_ARITHMETIC))
        with self.assertRaises(translations.TranslationError):
            translations.compose(translations.cutoff_translation('z'), translations.cutoff_translation('z'))

    def test_disjunctive(self):
        condition = syntax.Atom('Z', ('c',))
        translation = translations.disjunctive(
            translations.cutoff_translation('z'), condition, translations.identity(syntax.ARITHMETIC),
        )
        self.assertEqual(translation.params, ('z', 'c'))
        structure = models.cutoff_model(3)
        cut = translations.internal_model(structure, translation, (1, 0))
        self.assertTrue(models.is_isomorphic(cut, models.cutoff_model(1)))
        whole = translations.internal_model(structure, translation, (1, 2))
        self.assertTrue(models.is_isomorphic(whole, structure))

    def test_disjunctive_condition_on_formal_variables(self):
        with self.assertRaises(translations.TranslationError):
            translations.disjunctive(
                translations.cutoff_translation('z'), syntax.Atom('Z', ('x0',)),
                translations.identity(syntax.ARITHMETIC),
            )


class TestInternalModels(unittest.TestCase):

    def test_quotient(self):
        translation = translations.translation_from_json(jan_quotient_data('E(x0, x1)'))
        inner = translations.internal_model(models.jan_model((1, 2)), translation)
        self.assertEqual(inner.size, 2)
        self.assertEqual(inner.relations['E'], frozenset({(0, 0), (1, 1)}))

    def test_incompatible_congruence(self):
        translation = translations.translation_from_json(jan_quotient_data('x0 = x0'))
        with self.assertRaises(translations.CongruenceError):
            translations.internal_model(models.jan_model((1, 2)), translation)

    def test_empty_domain(self):
        data = dict(jan_quotient_data(None), domain='bot')
        translation = translations.translation_from_json(data)
        with self.assertRaises(translations.TranslationError):
            translations.internal_model(models.jan_model((2,)), translation)

    def test_parameter_count(self):
        with self.assertRaises(translations.TranslationError):
            translations.internal_model(models.cutoff_model(3), translations.cutoff_translation('z'))

    def test_load_translation(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'quotient.json')
            with open(path, 'w', encoding='utf-8') as handle:
                json.dump(jan_quotient_data('E(x0, x1)'), handle)
            translation = translations.load_translation(path)
        self.assertEqual(translation.name, 'quotient')
        self.assertEqual(translation.source, syntax.JAN)

    def test_unknown_signature(self):
        data = dict(jan_quotient_data(None), source='groups')
        self.assertRaises(translations.TranslationError, translations.translation_from_json, data)

    def test_relativize_to_class(self):
        structure = models.scat_model(3)
        formula = translations.relativize_to_class(parsing.parse('E y. ~y = x'), 'x')
        self.assertFalse(models.evaluate(structure, formula, {'x': 0}))
        self.assertTrue(models.evaluate(structure, formula, {'x': 3}))


class TestWitnessComparison(unittest.TestCase):

    def setUp(self):
        self.numbers = models.NaturalNumbers(witness_bound=20)
        self.one = theories.numeral_sentence(1)
        self.two = theories.numeral_sentence(2)

    def holds(self, formula):
        return models.evaluate(self.numbers, formula)

    def test_comparison(self):
        self.assertTrue(self.holds(translations.witness_compare(self.one, self.two)))
        self.assertFalse(self.holds(translations.witness_compare(self.two, self.one)))
        self.assertFalse(self.holds(translations.witness_compare(self.one, self.one)))
        self.assertTrue(self.holds(translations.witness_compare(self.one, self.one, strict=False)))

    def test_ortho(self):
        for alpha, beta in ((self.one, self.two), (self.two, self.one), (self.one, self.one)):
            for strict in (True, False):
                gamma = translations.witness_compare(alpha, beta, strict=strict)
                self.assertNotEqual(self.holds(gamma), self.holds(translations.ortho(gamma)))

    def test_split(self):
        gamma = translations.witness_compare(self.one, self.two, strict=False)
        alpha, _, strict = translations.split_comparison(gamma)
        self.assertEqual(alpha, self.one)
        self.assertFalse(strict)
        self.assertIsNone(translations.split_comparison(self.one))
        self.assertRaises(ValueError, translations.ortho, syntax.BOT)

    def test_purity(self):
        with self.assertRaises(syntax.PurityError):
            translations.witness_compare(parsing.parse('A x. x = x'), self.one)


class TestSigmaQ(unittest.TestCase):

    def test_needs_a_witness_below_a_number(self):
        sigma = parsing.parse('E x. 0 = x')
        theory = translations.sigma_q(sigma)
        self.assertTrue(syntax.is_sentence(theory))
        self.assertFalse(models.satisfies(models.cutoff_model(0), theory))
        self.assertTrue(models.satisfies(models.cutoff_model(2), theory))

    def test_parameter(self):
        sigma = parsing.parse('E x. 0 = x')
        self.assertEqual(translations.sigma_q(sigma, variant='param').free_variables, {'x'})
        self.assertEqual(translations.sigma_q(sigma, parameter='a').free_variables, {'a'})

    def test_errors(self):
        self.assertRaises(ValueError, translations.sigma_q, parsing.parse('E x. 0 = x'), variant='other')
        self.assertRaises(syntax.PurityError, translations.sigma_q, parsing.parse('A x. 0 = x'))
        self.assertRaises(syntax.PurityError, translations.sigma_q, parsing.parse('E x. x < y'))


class TestConsequence(unittest.TestCase):

    def test_entails(self):
        tn = syntax.conjunction(theories.tn_axioms())
        self.assertTrue(translations.entails(tn, parsing.parse('A x. ~S(x) < x'), 3))
        self.assertFalse(translations.entails(syntax.TOP, parsing.parse('E x. E y. x < y'), 2))
        self.assertEqual(translations.counterexample(syntax.TOP, parsing.parse('E x. E y. x < y'), 2).size, 1)

    def test_consistent(self):
        self.assertTrue(translations.consistent(syntax.TOP, 2))
        self.assertFalse(translations.consistent(syntax.BOT, 2))

    def test_witness_part(self):
        sigma = parsing.parse('E x. 0 = x')
        cut, part = translations.witness_part(translations.sigma_q(sigma))
        self.assertEqual(part, syntax.BExists('x', cut, True, sigma.body))
        self.assertIsNone(translations.witness_part(sigma))

    def test_contradiction_has_no_witness_theory(self):
        theory = translations.sigma_q(parsing.parse('E x. x < x'))
        search = translations.search_counterexample(theory, syntax.BOT, 8)
        self.assertIsNone(search.counterexample)
        self.assertEqual(search.examined, 36)
        self.assertFalse(translations.consistent(theory, 8))

    def test_junk_above_the_cut(self):
        # 0 < 1 is a TN number, 2 is a fixed point of S outside of it
        lower = {0, 1}
        structure = models.FiniteStructure(
            3, syntax.ARITHMETIC, {'<': frozenset({(0, 1)})},
            {
                'S': {(0,): 1, (1,): 2, (2,): 2},
                'A': {(x, y): min(x + y, 1) if {x, y} <= lower else 2 for x in range(3) for y in range(3)},
                'M': {(x, y): min(x * y, 1) if {x, y} <= lower else 2 for x in range(3) for y in range(3)},
            },
            {'Z': 0},
        )
        sigma, other = parsing.parse('E x. 0 = x'), parsing.parse('E x. S x = x')
        premise = translations.sigma_q(translations.witness_compare(sigma, other, strict=False))
        reverse = translations.witness_compare(other, sigma, strict=True)
        self.assertTrue(models.satisfies(structure, premise))
        self.assertTrue(models.satisfies(structure, reverse))

        self.assertFalse(translations.entails(premise, syntax.Not(reverse), 3))
        found = translations.counterexample(premise, syntax.Not(reverse), 3)
        self.assertEqual(found.size, 3)
        self.assertTrue(models.satisfies(found, premise))
        self.assertTrue(models.satisfies(found, reverse))
        self.assertTrue(translations.entails(premise, syntax.Not(reverse), 2))

    def test_budget(self):
        theory = translations.sigma_q(parsing.parse('E x. x < x'))
        search = translations.search_counterexample(theory, syntax.BOT, 8, budget=5)
        self.assertIsNone(search.verdict)
        self.assertIsNone(translations.consistent(theory, 8, budget=5))
        self.assertRaises(models.BudgetExceededError, translations.counterexample, theory, syntax.BOT, 8, budget=5)


class TestZeroParameter(unittest.TestCase):

    def test_internal_model(self):
        structure = models.scat_model(3)
        # element 4 is the second element of the class of size 3
        inner = translations.internal_model(structure, translations.zero_parameter_translation('a'), (4,))
        self.assertEqual(inner.size, 2)
        self.assertEqual(inner.relations['Z'], frozenset({(0,)}))
        self.assertEqual(inner.relations['<'], frozenset({(0, 1)}))
        self.assertEqual(inner.relations['S'], frozenset({(0, 1), (1, 1)}))

    def test_friendly_maps(self):
        sigma = parsing.parse('E x. 0 = x')
        self.assertEqual(translations.friendly_map_r(sigma), translations.sigma_q(sigma))
        scattered = translations.friendly_map_scat(sigma)
        self.assertTrue(syntax.is_sentence(scattered))
        self.assertTrue(models.satisfies(models.scat_model(2), scattered))
        self.assertFalse(models.satisfies(models.scat_model(1), scattered))
