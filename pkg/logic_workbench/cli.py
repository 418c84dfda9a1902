"""Command line entry point: ``logic-workbench <command> ...``.

Exit status: 0 true or success, 1 false or a failed property, 2 unknown or
inconclusive, 3 usage or input error.
"""
import argparse
import json
import logging
import sys

from . import diagonal
from . import godel
from . import lindenbaum
from . import models
from . import parsing
from . import recursion
from . import scatqe
from . import suite
from . import syntax
from . import theories
from . import translations


logger = logging.getLogger(__name__)

EXIT_TRUE, EXIT_FALSE, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3
FINITE_THEORIES = ('TN',)


class UsageError(ValueError):
    """Raised for bad command line input."""


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')


def _status(value):
    return {True: EXIT_TRUE, False: EXIT_FALSE, None: EXIT_UNKNOWN}[value]


def _verdict(value):
    return {True: 'true', False: 'false', None: 'unknown'}[value]


def read_formula(text):
    """Parse ``text``; a registered finite theory name stands for the conjunction of its axioms."""
    if text in FINITE_THEORIES:
        return theories.axioms(text).conjunction()
    return parsing.parse(text)


def read_formula_file(path):
    with open(path, encoding='utf-8') as handle:
        return read_formula(handle.read().strip())


def read_model(description):
    """A model shorthand (``n_cutoff:5``, ``scat:3``, ``class:4``, ``jan:2,2,3``), ``N``, or a JSON file."""
    if description.startswith('model:'):
        description = description[len('model:'):]
    if description == 'N':
        return models.NaturalNumbers()
    kind = description.partition(':')[0]
    if kind in ('n_cutoff', 'scat', 'class', 'jan'):
        return models.build_model(description)
    try:
        return models.load_model(description)
    except OSError as e:
        raise UsageError(f'cannot read model {description!r}: {e.strerror}') from None


def _assignment(pairs, structure):
    assignment = {}
    for pair in pairs or ():
        var, _, value = pair.partition('=')
        if not value:
            raise UsageError(f'expected var=value, got {pair!r}')
        try:
            element = int(value)
        except ValueError:
            raise UsageError(f'values are element indices, got {value!r}') from None
        if isinstance(structure, models.FiniteStructure) and not 0 <= element < structure.size:
            raise UsageError(f'{element} is not an element of {structure.name or "the model"}')
        assignment[var.strip()] = element
    return assignment


def _integers(text):
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise UsageError(f'expected comma separated integers, got {text!r}') from None


def _emit(args, data, text):
    print(json.dumps(data, sort_keys=True) if args.json else text)


# commands

def cmd_fmt(args):
    formula = read_formula_file(args.file) if args.file else read_formula(args.formula)
    kind = syntax.classify(formula)
    text = parsing.print_formula(formula)
    _emit(args, {'formula': text, 'purity': kind.value if kind else None}, text)
    return EXIT_TRUE


def cmd_eval(args):
    structure = read_model(args.model)
    if isinstance(structure, models.NaturalNumbers) and args.bound is not None:
        structure = models.NaturalNumbers(args.bound)
    formula = read_formula(args.formula)
    value = models.evaluate(structure, formula, _assignment(args.assign, structure))
    _emit(args, {'value': _verdict(value)}, _verdict(value))
    return _status(value)


def cmd_models(args):
    try:
        signature = translations.SIGNATURES[args.signature]
    except KeyError:
        raise UsageError(f'unknown signature {args.signature!r}, expected one of {", ".join(translations.SIGNATURES)}')
    constraint = read_formula(args.constraint) if args.constraint else None
    found = list(models.enumerate_models(signature, args.max_size, constraint, budget=args.bound))
    if args.json:
        print(json.dumps([structure.to_json() for structure in found], sort_keys=True))
    else:
        for structure in found:
            print(json.dumps(structure.to_json(), sort_keys=True))
        print(f'{len(found)} model(s)')
    return EXIT_TRUE


def cmd_axioms(args):
    stream = theories.axioms(args.theory, args.bound)
    sentences = stream.take(args.count) if args.count is not None else list(stream)
    texts = [parsing.print_formula(sentence) for sentence in sentences]
    _emit(args, {'theory': stream.name, 'axioms': texts}, '\n'.join(texts))
    return EXIT_TRUE


def cmd_sigmaq(args):
    result = translations.sigma_q(read_formula(args.formula), args.variant, args.parameter)
    text = parsing.print_formula(result)
    _emit(args, {'formula': text}, text)
    return EXIT_TRUE


def cmd_wc(args):
    alpha, beta = read_formula(args.alpha), read_formula(args.beta)
    result = translations.witness_compare(alpha, beta, strict=args.strict)
    if args.ortho:
        result = translations.ortho(result)
    text = parsing.print_formula(result)
    value = None
    if args.evaluate:
        value = models.evaluate(models.NaturalNumbers(args.bound), result)
    data = {'formula': text, 'value': _verdict(value) if args.evaluate else None}
    _emit(args, data, text if not args.evaluate else f'{text}\n{_verdict(value)}')
    return _status(value) if args.evaluate else EXIT_TRUE


def cmd_translate(args):
    translation = translations.load_translation(args.file)
    formula = read_formula(args.formula)
    result = translations.apply(translation, formula)
    data = {'formula': parsing.print_formula(result)}
    lines = [data['formula']]
    status = EXIT_TRUE
    if args.model:
        structure = read_model(args.model)
        params = _integers(args.params) if args.params else []
        inner = translations.internal_model(structure, translation, params)
        outside = models.evaluate(structure, result, dict(zip(translation.params, params)))
        inside = models.evaluate(inner, formula)
        data.update(internal_model=inner.to_json(), outside=_verdict(outside), inside=_verdict(inside))
        lines += [f'internal model of size {inner.size}', f'outside {_verdict(outside)}, inside {_verdict(inside)}']
        status = EXIT_TRUE if outside == inside else EXIT_FALSE
    _emit(args, data, '\n'.join(lines))
    return status


def cmd_qe(args):
    formula = read_formula(args.formula)
    equiv = scatqe.VarEquivalence.parse(args.equiv) if args.equiv else scatqe.VarEquivalence.empty()
    stray = formula.free_variables - set(equiv.order)
    if stray:
        raise UsageError(f'free variables {sorted(stray)} are missing from the equivalence')
    friendly = scatqe.qe(formula, equiv, args.bound)
    certificate = scatqe.certify_friendly(friendly, equiv)
    text = scatqe.friendly_text(friendly)
    exact = scatqe.full_form(friendly) is not None
    data = {
        'friendly': text, 'guard': parsing.print_formula(equiv.guard_formula()),
        'leaves': certificate.leaves, 'anchors': list(certificate.anchors), 'beyond_bound': not exact,
    }
    lines = [text, f'certified friendly: {certificate.leaves} leaves, anchors {", ".join(certificate.anchors) or "-"}']
    if not exact:
        lines.append('unknown-beyond-bound')
    _emit(args, data, '\n'.join(lines))
    return EXIT_TRUE if exact else EXIT_UNKNOWN


def cmd_decide(args):
    value = scatqe.decide_sentence(read_formula(args.formula), args.bound)
    _emit(args, {'value': _verdict(value)}, _verdict(value))
    return _status(value)


def _oracle(description, left=None):
    if description == 'jprop':
        if left is None:
            raise UsageError('jprop is only available on the right, over the left theory')
        return lindenbaum.jprop(left)[2]
    return lindenbaum.ModelTheoryOracle(read_model(description))


def cmd_iso(args):
    left = _oracle(args.left)
    right = _oracle(args.right, left)
    if isinstance(right, lindenbaum.JpropOracle):
        relation = lindenbaum.jprop_relation(left, right)
    else:
        relation = lindenbaum.truth_matching_relation(left, right)
    state = lindenbaum.build_iso(relation, left, right, args.steps, args.budget)
    problems = lindenbaum.check_iso(state)
    pairs = [(syntax.to_text(phi), syntax.to_text(phi_prime)) for phi, phi_prime in state.sentence_pairs()]
    lines = [f'{a}  <->  {b}' for a, b in pairs] + problems
    _emit(args, {'pairs': pairs, 'problems': problems}, '\n'.join(lines))
    return EXIT_FALSE if problems else EXIT_TRUE


def cmd_fixedpoint(args):
    if args.pi:
        pi, count = read_formula_file(args.pi), 0
    else:
        pi, count = diagonal.pi_formula(args.theories, args.steps), args.theories
    point = diagonal.fixed_point(pi)
    result = diagonal.check_fixed_point(point, pi, count, args.bound)
    data = {
        'size': syntax.size(point.sentence),
        'purity': point.certificate.kind.value,
        'template_code_bits': point.template_code.bit_length(),
        'value': _verdict(result.sentence_value),
        'triangle': _verdict(result.triangle_value),
        'consistent_with': [_verdict(value) for value in result.consistent_with],
    }
    text = '\n'.join(f'{key}: {value}' for key, value in sorted(data.items()))
    _emit(args, data, text)
    if None in (result.sentence_value, result.triangle_value):
        return EXIT_UNKNOWN
    return EXIT_TRUE if result.agree else EXIT_FALSE


def cmd_rosser(args):
    if bool(args.delta0) != bool(args.delta1):
        raise UsageError('give both --delta0 and --delta1, or neither for the toy demo')
    if args.delta0:
        rho = diagonal.rosser_rho(read_formula_file(args.delta0), read_formula_file(args.delta1))
        listed = None
    else:
        report = diagonal.rosser_demo(args.cutoff, args.steps)
        rho, listed = report.rho, (report.in_theorems, report.in_refutables)
    alpha, beta = rho.sides
    data = {
        'code_bits': godel.encode(rho.sentence, diagonal.SIGNATURE).bit_length(),
        'strict_comparison': True,
        'sides_pure': all(syntax.classify(side) == syntax.Purity.ONE_SIGMA1 for side in (alpha, beta)),
        'listed': list(listed) if listed is not None else None,
    }
    text = '\n'.join(f'{key}: {value}' for key, value in sorted(data.items()))
    _emit(args, data, text)
    if listed is not None and any(listed):
        return EXIT_FALSE
    return EXIT_TRUE if data['sides_pure'] else EXIT_FALSE


def _program(name):
    if name in recursion.SAMPLE_PROGRAMS:
        return recursion.SAMPLE_PROGRAMS[name]
    try:
        with open(name, encoding='utf-8') as handle:
            return recursion.parse_program(handle.read())
    except OSError as e:
        raise UsageError(f'{name!r} is neither a sample program nor a readable file: {e.strerror}') from None


def cmd_km(args):
    if args.demo:
        verdicts = recursion.separation_demo(_program(args.demo), _integers(args.ns), args.fuel)
        rows = [verdict._asdict() for verdict in verdicts]
        lines = [f'n={v.n} pair={v.pair} in_w={v.in_w} output={v.output} -> {v.disjunct}' for v in verdicts]
        _emit(args, {'index': verdicts[0].index if verdicts else None, 'verdicts': rows}, '\n'.join(lines))
        return EXIT_TRUE if all(v.disjunct for v in verdicts) else EXIT_UNKNOWN
    if args.pair is None:
        raise UsageError('km needs --pair n,x or --demo PROGRAM')
    values = _integers(args.pair)
    if len(values) != 2:
        raise UsageError(f'--pair takes n,x, got {args.pair!r}')
    n, x = values
    p = recursion.cantor_pair(n, x)
    value = recursion.run_apply(x, p, args.fuel)
    member = None if value is None else value == args.i
    label = {True: 'yes', False: 'no', None: 'no-within-fuel'}[member]
    _emit(args, {'pair': p, 'output': value, 'member': label}, f'<{n},{x}> = {p}: {label}')
    return _status(member)


def cmd_suite(args):
    reports = suite.run_suite(args.seed, args.check)
    if args.archive:
        suite.write_archive(reports, args.archive)
    if args.json:
        print(json.dumps([report.to_json() for report in reports], sort_keys=True))
    else:
        print(suite.summary(reports), end='')
    if any(report.passed is False for report in reports):
        return EXIT_FALSE
    return EXIT_UNKNOWN if any(report.passed is None for report in reports) else EXIT_TRUE


# parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=0, help='seed of randomised checks')
    common.add_argument('--bound', type=int, default=None, help='command specific bound')
    common.add_argument('--fuel', type=int, default=None, help='register machine steps')
    common.add_argument('--json', action='store_true', help='print JSON')
    common.add_argument('--verbose', action='store_true', help='log debug output')

    parser = _Parser(prog='logic-workbench', description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest='command', parser_class=_Parser)
    commands.required = True

    def command(name, handler, help_text):
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    sub = command('fmt', cmd_fmt, 'parse and print a formula canonically')
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument('--formula')
    group.add_argument('--file')

    sub = command('eval', cmd_eval, 'evaluate a formula in a model')
    sub.add_argument('--model', required=True)
    sub.add_argument('--formula', required=True)
    sub.add_argument('--assign', action='append', metavar='VAR=ELEMENT')

    sub = command('models', cmd_models, 'enumerate the models of a constraint')
    sub.add_argument('--signature', default='relational-arithmetic')
    sub.add_argument('--max-size', type=int, default=3)
    sub.add_argument('--constraint')

    sub = command('axioms', cmd_axioms, 'print the axioms of a theory')
    sub.add_argument('theory', choices=theories.THEORY_NAMES)
    sub.add_argument('--count', type=int)

    sub = command('sigmaq', cmd_sigmaq, 'build sigma^q')
    sub.add_argument('--formula', required=True)
    sub.add_argument('--variant', choices=('plain', 'param', 'star'), default='plain')
    sub.add_argument('--parameter')

    sub = command('wc', cmd_wc, 'witness comparison of two pure 1-Sigma1 sentences')
    sub.add_argument('--alpha', required=True)
    sub.add_argument('--beta', required=True)
    sub.add_argument('--strict', action='store_true')
    sub.add_argument('--ortho', action='store_true')
    sub.add_argument('--evaluate', action='store_true', help='evaluate over the natural numbers')

    sub = command('translate', cmd_translate, 'apply a translation file')
    sub.add_argument('--file', required=True)
    sub.add_argument('--formula', required=True)
    sub.add_argument('--model')
    sub.add_argument('--params')

    sub = command('qe', cmd_qe, 'friendly form in the scattered model')
    sub.add_argument('--formula', required=True)
    sub.add_argument('--equiv', default='')

    sub = command('decide', cmd_decide, 'decide a sentence in the scattered model')
    sub.add_argument('--formula', required=True)

    sub = command('iso', cmd_iso, 'back and forth between two theories')
    sub.add_argument('--left', required=True)
    sub.add_argument('--right', required=True)
    sub.add_argument('--steps', type=int, default=20)
    sub.add_argument('--budget', type=int)

    sub = command('fixedpoint', cmd_fixedpoint, 'build and check a fixed point sentence')
    sub.add_argument('--pi')
    sub.add_argument('--theories', type=int, default=2)
    sub.add_argument('--steps', type=int, default=2)

    sub = command('rosser', cmd_rosser, 'build a Rosser sentence')
    sub.add_argument('--delta0')
    sub.add_argument('--delta1')
    sub.add_argument('--cutoff', type=int, default=2)
    sub.add_argument('--steps', type=int, default=4)

    sub = command('km', cmd_km, 'Kleene application and the Km sets')
    sub.add_argument('--i', type=int, default=0)
    sub.add_argument('--pair')
    sub.add_argument('--demo', help='sample program name or program file')
    sub.add_argument('--ns', default='0,1,2,3,4')

    sub = command('suite', cmd_suite, 'run the acceptance battery')
    sub.add_argument('--check', action='append', choices=tuple(suite.CHECKS))
    sub.add_argument('--archive', help='also write a zip of the reports')
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG)
    try:
        return args.handler(args)
    except (ValueError, syntax.SignatureError, OSError) as e:
        # parse, signature, purity, translation and bound errors are all ValueErrors
        print(f'error: {e}', file=sys.stderr)
        return EXIT_USAGE
    except (models.BudgetExceededError, lindenbaum.IsoSearchError) as e:
        print(f'inconclusive: {e}', file=sys.stderr)
        return EXIT_UNKNOWN
