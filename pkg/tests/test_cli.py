import json
import os
import tempfile
import unittest

from logic_workbench import cli
from logic_workbench import diagonal
from logic_workbench import godel
from logic_workbench import parsing
from logic_workbench import recursion
from logic_workbench import syntax
from logic_workbench import translations

from .utils import run_cli


def write_file(directory, name, text):
    path = os.path.join(directory, name)
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(text)
    return path


class TestFormulas(unittest.TestCase):

    def test_fmt(self):
        status, out, _ = run_cli('fmt', '--formula', 'A x. E y<x. S y = x')
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(out, '(A x. (E y < x. S y = x))\n')

    def test_fmt_json(self):
        status, out, _ = run_cli('fmt', '--json', '--formula', 'E x. x < x')
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(json.loads(out), {'formula': '(E x. x < x)', 'purity': 'pure-1-sigma1'})

    def test_fmt_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'formula.txt')
            with open(path, 'w', encoding='utf-8') as handle:
                handle.write('x < y\n')
            status, out, _ = run_cli('fmt', '--file', path)
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(out, 'x < y\n')

    def test_syntax_error(self):
        status, _, err = run_cli('fmt', '--formula', 'A x. (x <')
        self.assertEqual(status, cli.EXIT_USAGE)
        self.assertTrue(err.startswith('error: '))

    def test_sigmaq(self):
        status, out, _ = run_cli('sigmaq', '--formula', 'E x. 0 = x')
        self.assertEqual(status, cli.EXIT_TRUE)
        expected = translations.sigma_q(parsing.parse('E x. 0 = x'))
        self.assertEqual(out, parsing.print_formula(expected) + '\n')
        self.assertTrue(out.startswith('(E z. ((E x < z. 0 = x) & '))
        self.assertEqual(parsing.parse(out.strip()), expected)

    def test_sigmaq_json(self):
        status, out, _ = run_cli('sigmaq', '--json', '--variant', 'param', '--formula', 'E x. 0 = x')
        self.assertEqual(status, cli.EXIT_TRUE)
        expected = translations.sigma_q(parsing.parse('E x. 0 = x'), 'param')
        self.assertEqual(json.loads(out), {'formula': parsing.print_formula(expected)})

    def test_axioms(self):
        status, out, _ = run_cli('axioms', 'TN', '--count', '2')
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(out, '(A x. ~x < 0)\n(A x. (A y. (A z. ((x < y & y < z) -> x < z))))\n')

    def test_axioms_json(self):
        status, out, _ = run_cli('axioms', 'TN', '--count', '1', '--json')
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(json.loads(out), {'theory': 'TN', 'axioms': ['(A x. ~x < 0)']})

    def test_wc(self):
        status, out, _ = run_cli('wc', '--alpha', 'E x. 0 = x', '--beta', 'E y. y < y')
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(out, '(E x. (0 = x & (A y < x. ~y < y)))\n')

    def test_wc_strict_evaluated(self):
        status, out, _ = run_cli(
            'wc', '--alpha', 'E x. 0 = x', '--beta', 'E y. y < y', '--strict', '--evaluate', '--bound', '5',
        )
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(out, '(E x. (0 = x & (A y <= x. ~y < y)))\ntrue\n')

    def test_wc_ortho(self):
        status, out, _ = run_cli('wc', '--alpha', 'E x. 0 = x', '--beta', 'E y. y < y', '--ortho', '--json')
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(json.loads(out), {'formula': '(E y. (y < y & (A x <= y. ~0 = x)))', 'value': None})

    def test_wc_impure_side(self):
        status, _, err = run_cli('wc', '--alpha', 'A x. x = x', '--beta', 'E y. y < y')
        self.assertEqual(status, cli.EXIT_USAGE)
        self.assertIn('expected a pure 1-Sigma1 sentence', err)

    def test_translate(self):
        data = {'source': 'jan', 'target': 'jan', 'defs': {'E': 'E(x0, x1)'}, 'congruence': 'E(x0, x1)'}
        with tempfile.TemporaryDirectory() as directory:
            path = write_file(directory, 'quotient.json', json.dumps(data))
            formula = 'E x. E y. (E(x, y) & ~x = y)'
            status, out, _ = run_cli('translate', '--file', path, '--formula', formula)
            self.assertEqual((status, out), (cli.EXIT_TRUE, '(E x. (E y. (E(x, y) & ~E(x, y))))\n'))
            status, out, _ = run_cli('translate', '--file', path, '--formula', formula, '--model', 'jan:1,2')
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(out.splitlines(), [
            '(E x. (E y. (E(x, y) & ~E(x, y))))',
            'internal model of size 2',
            'outside false, inside false',
        ])


class TestEvaluation(unittest.TestCase):

    def test_eval(self):
        self.assertEqual(run_cli('eval', '--model', 'n_cutoff:3', '--formula', 'A x. x < x')[:2], (1, 'false\n'))
        self.assertEqual(run_cli('eval', '--model', 'n_cutoff:3', '--formula', 'TN')[:2], (0, 'true\n'))
        status, out, _ = run_cli('eval', '--model', 'N', '--bound', '5', '--formula', 'E x. 0 = x')
        self.assertEqual((status, out), (0, 'true\n'))

    def test_assignment(self):
        status, out, _ = run_cli(
            'eval', '--model', 'scat:3', '--formula', 'x < y', '--assign', 'x=1', '--assign', 'y=2',
        )
        self.assertEqual((status, out), (0, 'true\n'))
        status, _, err = run_cli('eval', '--model', 'n_cutoff:3', '--formula', 'x = x', '--assign', 'x=7')
        self.assertEqual(status, cli.EXIT_USAGE)
        self.assertIn('not an element', err)

    def test_models(self):
        status, out, _ = run_cli('models', '--signature', 'jan', '--max-size', '1')
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(out, (
            '{"functions": {}, "name": "model of size 1", "relations": {"E": []}, "universe_size": 1}\n'
            '{"functions": {}, "name": "model of size 1", "relations": {"E": [[0, 0]]}, "universe_size": 1}\n'
            '2 model(s)\n'
        ))
        status, out, _ = run_cli('models', '--signature', 'jan', '--max-size', '1', '--constraint', 'A x. ~E(x, x)')
        self.assertEqual((status, out.splitlines()[-1]), (cli.EXIT_TRUE, '1 model(s)'))
        status, _, err = run_cli('models', '--signature', 'groups')
        self.assertEqual(status, cli.EXIT_USAGE)
        self.assertIn('unknown signature', err)


class TestScattered(unittest.TestCase):

    def test_decide(self):
        self.assertEqual(run_cli('decide', '--formula', 'A x. E y. x < y')[:2], (1, 'false\n'))
        self.assertEqual(run_cli('decide', '--formula', 'E x. E y. x < y')[:2], (0, 'true\n'))

    def test_qe(self):
        status, out, _ = run_cli('qe', '--formula', 'E y. x < y', '--equiv', 'x')
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(out.splitlines(), ['[x| (E y. x < y)]', 'certified friendly: 1 leaves, anchors x'])

    def test_qe_missing_variable(self):
        status, _, err = run_cli('qe', '--formula', 'x < y', '--equiv', 'x')
        self.assertEqual(status, cli.EXIT_USAGE)
        self.assertIn('missing from the equivalence', err)


class TestIso(unittest.TestCase):

    def test_truth_matching(self):
        status, out, _ = run_cli('iso', '--left', 'jan:1,2', '--right', 'jan:1', '--steps', '4', '--json')
        self.assertEqual(status, cli.EXIT_TRUE)
        data = json.loads(out)
        self.assertEqual(data['problems'], [])
        self.assertEqual(len(data['pairs']), 4)

    def test_jprop_on_the_left(self):
        status, _, err = run_cli('iso', '--left', 'jprop', '--right', 'jan:1')
        self.assertEqual(status, cli.EXIT_USAGE)
        self.assertIn('only available on the right', err)


class TestDiagonal(unittest.TestCase):

    def test_fixedpoint(self):
        with tempfile.TemporaryDirectory() as directory:
            path = write_file(directory, 'pi.txt', 'bot\n')
            status, out, _ = run_cli('fixedpoint', '--pi', path, '--bound', '3')
        self.assertEqual(status, cli.EXIT_TRUE)
        point = diagonal.fixed_point(syntax.BOT)
        self.assertEqual(out.splitlines(), [
            'consistent_with: []',
            f'purity: {point.certificate.kind.value}',
            f'size: {syntax.size(point.sentence)}',
            f'template_code_bits: {point.template_code.bit_length()}',
            'triangle: false',
            'value: false',
        ])

    def test_fixedpoint_json(self):
        with tempfile.TemporaryDirectory() as directory:
            path = write_file(directory, 'pi.txt', 'top\n')
            status, out, _ = run_cli('fixedpoint', '--pi', path, '--bound', '3', '--json')
        self.assertEqual(status, cli.EXIT_TRUE)
        data = json.loads(out)
        self.assertEqual(data['purity'], syntax.Purity.ONE_SIGMA1.value)
        self.assertEqual((data['value'], data['triangle'], data['consistent_with']), ('true', 'true', []))

    def test_rosser(self):
        status, out, _ = run_cli('rosser', '--cutoff', '2', '--steps', '2')
        self.assertEqual(status, cli.EXIT_TRUE)
        report = diagonal.rosser_demo(2, 2)
        self.assertEqual(out.splitlines(), [
            f'code_bits: {godel.encode(report.rho.sentence, diagonal.SIGNATURE).bit_length()}',
            'listed: [False, False]',
            'sides_pure: True',
            'strict_comparison: True',
        ])

    def test_rosser_files(self):
        with tempfile.TemporaryDirectory() as directory:
            delta = write_file(directory, 'delta.txt', 'bot\n')
            status, out, _ = run_cli('rosser', '--delta0', delta, '--delta1', delta, '--json')
            self.assertEqual(run_cli('rosser', '--delta0', delta)[0], cli.EXIT_USAGE)
        self.assertEqual(status, cli.EXIT_TRUE)
        rho = diagonal.rosser_rho(syntax.BOT, syntax.BOT)
        self.assertEqual(json.loads(out), {
            'code_bits': godel.encode(rho.sentence, diagonal.SIGNATURE).bit_length(),
            'listed': None,
            'sides_pure': True,
            'strict_comparison': True,
        })


class TestKm(unittest.TestCase):

    def test_pair(self):
        one = recursion.encode_program(recursion.CONSTANT_ONE)
        status, out, _ = run_cli('km', '--pair', f'3,{one}', '--i', '1', '--json')
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(json.loads(out)['member'], 'yes')
        status, _, _ = run_cli('km', '--pair', f'3,{one}', '--i', '0')
        self.assertEqual(status, cli.EXIT_FALSE)

    def test_demo(self):
        status, out, _ = run_cli('km', '--demo', 'evens', '--ns', '0,1', '--fuel', '100')
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual(len(out.splitlines()), 2)

    def test_usage(self):
        self.assertEqual(run_cli('km')[0], cli.EXIT_USAGE)
        self.assertEqual(run_cli('km', '--pair', '1,2,3')[0], cli.EXIT_USAGE)
        self.assertEqual(run_cli('km', '--demo', 'no-such-program')[0], cli.EXIT_USAGE)


class TestSuite(unittest.TestCase):

    def test_single_check(self):
        status, out, _ = run_cli('suite', '--check', 'tn-soundness', '--json')
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertEqual([report['name'] for report in json.loads(out)], ['tn-soundness'])

    def test_archive(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'reports.zip')
            status, out, _ = run_cli('suite', '--check', 'tn-soundness', '--archive', path)
            self.assertTrue(os.path.exists(path))
        self.assertEqual(status, cli.EXIT_TRUE)
        self.assertTrue(out.startswith('PASS tn-soundness'))


class TestUsage(unittest.TestCase):

    def test_missing_command(self):
        self.assertEqual(run_cli()[0], cli.EXIT_USAGE)

    def test_unknown_theory(self):
        self.assertEqual(run_cli('axioms', 'ZFC')[0], cli.EXIT_USAGE)
