import unittest

from logic_workbench import lindenbaum
from logic_workbench import models
from logic_workbench import parsing
from logic_workbench import syntax


def theory_of(*class_sizes):
    return lindenbaum.ModelTheoryOracle(models.jan_model(class_sizes))


class TestOracles(unittest.TestCase):

    def test_pseudo_atoms(self):
        self.assertTrue(lindenbaum.is_pseudo_atom(parsing.parse('E(x, y)')))
        self.assertTrue(lindenbaum.is_pseudo_atom(parsing.parse('A x. (E(x, x) & top)')))
        self.assertFalse(lindenbaum.is_pseudo_atom(parsing.parse('~A x. E(x, x)')))
        self.assertFalse(lindenbaum.is_pseudo_atom(syntax.TOP))

    def test_model_theory(self):
        oracle = theory_of(1, 2)
        self.assertTrue(oracle.proves(parsing.parse('A x. E(x, x)')))
        self.assertFalse(oracle.proves(parsing.parse('A x. A y. E(x, y)')))
        self.assertEqual(oracle.sentence(0), syntax.BOT)
        sentence = parsing.parse('A v0. E(v0, v0)')
        self.assertEqual(oracle.sentence(oracle.code(sentence)), sentence)
        self.assertTrue(oracle.equivalent(sentence, syntax.TOP))

    def test_jprop_codes(self):
        fragment = lindenbaum.JpropOracle(theory_of(1))
        for n in range(300):
            self.assertEqual(fragment.code(fragment.sentence(n)), n)
        self.assertEqual(fragment.sentence(2), lindenbaum.j_atom(0))
        self.assertEqual(lindenbaum.j_index(lindenbaum.j_atom(12)), 12)
        self.assertIsNone(lindenbaum.j_index(parsing.parse('E(x, y)')))

    def test_jprop_unfolds_to_the_base(self):
        base = theory_of(1, 2)
        fragment = lindenbaum.JpropOracle(base)
        true_code = base.code(parsing.parse('A v0. E(v0, v0)'))
        false_code = base.code(parsing.parse('A v0. A v1. E(v0, v1)'))
        self.assertTrue(fragment.proves(lindenbaum.j_atom(true_code)))
        self.assertFalse(fragment.proves(lindenbaum.j_atom(false_code)))
        self.assertTrue(fragment.proves(syntax.Implies(lindenbaum.j_atom(false_code), syntax.BOT)))
        with self.assertRaises(syntax.SignatureError):
            fragment.proves(parsing.parse('A x. E(x, x)'))


class TestJprop(unittest.TestCase):

    def test_stream(self):
        stream, relation, fragment = lindenbaum.jprop(theory_of(1), bound=1)
        axioms = stream.take(6)
        self.assertEqual(axioms[1], syntax.iff(lindenbaum.j_atom(0), syntax.BOT))
        self.assertEqual(axioms[3], syntax.iff(lindenbaum.j_atom(1), syntax.TOP))
        self.assertEqual(axioms[5], lindenbaum.j_atom(1))
        self.assertTrue(relation.related(syntax.TOP, lindenbaum.j_atom(1)))
        self.assertEqual(fragment.signature, lindenbaum.JPROP)
        self.assertIs(stream.signature, fragment.signature)

    def test_stream_signature(self):
        stream, _, _ = lindenbaum.jprop(theory_of(1, 2), bound=2)
        for axiom in stream.take(30):
            syntax.check_signature(axiom, stream.signature)
        self.assertEqual(lindenbaum.JPROP.relation_arity('J17'), 0)
        self.assertEqual(lindenbaum.JPROP.relation_arity('E'), 2)
        with self.assertRaises(syntax.SignatureError):
            syntax.check_signature(lindenbaum.j_atom(3), syntax.JAN)
        with self.assertRaises(syntax.SignatureError):
            syntax.check_signature(parsing.parse('x < y'), lindenbaum.JPROP)

    def test_witness_conditions(self):
        base = theory_of(1, 2)
        _, relation, fragment = lindenbaum.jprop(base, bound=1)
        results = lindenbaum.verify_witness(relation, base, fragment, sample=20)
        self.assertEqual(
            [result.condition for result in results],
            ['left totality', 'right totality', 'equivalence transfer', 'connectives'],
        )
        self.assertTrue(all(result.passed for result in results), results)

    def test_broken_relation_is_caught(self):
        left, right = theory_of(1, 2), theory_of(1)
        truth = lindenbaum.truth_matching_relation(left, right)
        broken = lindenbaum.WitnessRelation(
            'negated', truth.related, lambda phi: syntax.Not(truth.image(phi)), truth.preimage,
        )
        results = lindenbaum.verify_witness(broken, left, right, sample=10)
        self.assertFalse(results[0].passed)
        self.assertIsNotNone(results[0].counterexample)


class TestBackAndForth(unittest.TestCase):

    def test_truth_matching_iso(self):
        left, right = theory_of(1, 2), theory_of(1)
        state = lindenbaum.build_iso(lindenbaum.truth_matching_relation(left, right), left, right, steps=8)
        self.assertEqual(state.steps, 8)
        self.assertEqual(lindenbaum.check_iso(state), [])
        self.assertEqual(state.pairs[:2], [(0, 0), (1, 1)])

    def test_jprop_iso(self):
        base = theory_of(1, 2)
        _, relation, fragment = lindenbaum.jprop(base, bound=1)
        state = lindenbaum.build_iso(relation, base, fragment, steps=8)
        self.assertEqual(lindenbaum.check_iso(state), [])
        for phi, phi_prime in state.sentence_pairs():
            self.assertEqual(state.apply(phi), phi_prime)
            self.assertEqual(state.invert(phi_prime), phi)

    def test_images_of_compounds(self):
        left, right = theory_of(1, 2), theory_of(1)
        state = lindenbaum.build_iso(lindenbaum.truth_matching_relation(left, right), left, right, steps=4)
        self.assertEqual(state.apply(syntax.And(syntax.TOP, syntax.Not(syntax.BOT))),
                         syntax.And(syntax.TOP, syntax.Not(syntax.BOT)))
        with self.assertRaises(lindenbaum.IsoSearchError):
            state.apply(parsing.parse('A v0. A v1. E(v0, v1)'))
        self.assertTrue(lindenbaum.image_theory_proves(state, [syntax.TOP], syntax.TOP))

    def test_budget(self):
        base = theory_of(1)
        _, relation, fragment = lindenbaum.jprop(base, bound=1)
        with self.assertRaises(lindenbaum.IsoSearchError):
            lindenbaum.build_iso(relation, base, fragment, steps=4, budget=0)

    def test_extension_proves(self):
        oracle = theory_of(1, 2)
        reflexive = parsing.parse('A x. E(x, x)')
        self.assertTrue(lindenbaum.extension_proves(oracle, [reflexive], parsing.parse('E x. E(x, x)')))
        self.assertTrue(lindenbaum.extension_proves(oracle, [syntax.BOT], parsing.parse('A x. A y. E(x, y)')))
        self.assertFalse(lindenbaum.extension_proves(oracle, [], parsing.parse('A x. A y. E(x, y)')))
