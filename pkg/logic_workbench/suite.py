"""The acceptance battery: every desk checkable claim, run at the sizes it is stated for.

Each check seeds its own generator from the suite seed and its name, so a
report does not depend on which other checks ran.
"""
import concurrent.futures
import hashlib
import itertools
import logging
import random
from typing import NamedTuple, Optional, Tuple

import zipstream

from . import diagonal
from . import limits
from . import lindenbaum
from . import models
from . import recursion
from . import scatqe
from . import syntax
from . import theories
from . import translations


logger = logging.getLogger(__name__)


class CheckReport(NamedTuple):
    name: str
    passed: Optional[bool]
    checked: int
    lines: Tuple[str, ...] = ()

    @property
    def status(self):
        return {True: 'PASS', False: 'FAIL', None: 'UNKNOWN'}[self.passed]

    def text(self):
        head = f'{self.status} {self.name} ({self.checked} checked)'
        return '\n'.join([head] + [f'  {line}' for line in self.lines])

    def to_json(self):
        return {'name': self.name, 'status': self.status, 'checked': self.checked, 'lines': list(self.lines)}


def _report(name, failures, checked, notes=(), unknown=()):
    """Failures make the check fail, otherwise anything left undecided makes it unknown."""
    lines = tuple(notes) + tuple(failures[:10])
    if len(failures) > 10:
        lines += (f'... {len(failures) - 10} more failures',)
    lines += tuple(f'undecided: {line}' for line in unknown[:10])
    if failures:
        passed = False
    else:
        passed = None if unknown else True
    return CheckReport(name, passed, checked, lines)


# generators

_RELATIONAL = tuple(syntax.RELATIONAL_ARITHMETIC.relations) + (('=', 2),)
_SCATTERED = tuple(syntax.SCATTERED.relations) + (('=', 2),)


def random_formula(rng, relations, scope, quantifiers, size=4, bounded=True):
    """
    A random formula over ``relations`` whose free variables are among ``scope``.

    args:
        quantifiers (int): the quantifier depth allowed
        size (int): connective budget
        bounded (bool): whether bounded quantifiers may be drawn
    """
    scope = tuple(scope)
    roll = rng.random()
    if size <= 0 or roll < 0.25:
        if not scope:
            return rng.choice((syntax.TOP, syntax.BOT))
        symbol, arity = rng.choice(relations)
        return syntax.Atom(symbol, tuple(rng.choice(scope) for _ in range(arity)))
    if quantifiers > 0 and roll < 0.6:
        var = f'q{len(scope)}'
        body = random_formula(rng, relations, scope + (var,), quantifiers - 1, size - 1, bounded)
        if bounded and scope and rng.random() < 0.4:
            kind = rng.choice(syntax.BOUNDED_QUANTIFIERS)
            return kind(var, rng.choice(scope), rng.random() < 0.5, body)
        return rng.choice(syntax.QUANTIFIERS)(var, body)
    if roll < 0.7:
        return syntax.Not(random_formula(rng, relations, scope, quantifiers, size - 1, bounded))
    node = rng.choice(syntax.BINARY_CONNECTIVES)
    return node(
        random_formula(rng, relations, scope, quantifiers, size // 2, bounded),
        random_formula(rng, relations, scope, quantifiers, size // 2, bounded),
    )


def true_sigma(rng, witness=None):
    """A true pure 1-Sigma1 sentence ``E x. delta`` whose least witness is ``witness`` (at most 8)."""
    k = rng.randint(0, 8) if witness is None else witness
    pinned = syntax.numeral_formula(k, 'x')
    extras = [syntax.TOP]
    if k % 2 == 0:
        extras.append(syntax.BExists('y', 'x', False, syntax.Atom('A', ('y', 'y', 'x'))))
    if k > 0:
        extras.append(syntax.BExists('y', 'x', True, syntax.Atom('S', ('y', 'x'))))
    extra = rng.choice(extras)
    matrix = pinned if isinstance(extra, syntax.Top) else syntax.And(pinned, extra)
    return syntax.Exists('x', matrix)


def false_sigma(rng):
    """A false pure 1-Sigma1 sentence."""
    k = rng.randint(0, 8)
    pinned = syntax.numeral_formula(k, 'x')
    choices = [
        syntax.Atom('<', ('x', 'x')),
        syntax.And(pinned, syntax.Atom('S', ('x', 'x'))),
        syntax.And(pinned, syntax.BExists('y', 'x', True, syntax.Atom('A', ('y', 'y', 'x')))),
    ]
    if k % 2 == 0:
        # y + y = x with y < x fails for x = 0 only
        choices.pop()
        choices.append(syntax.And(syntax.numeral_formula(0, 'x'), syntax.BExists(
            'y', 'x', True, syntax.Atom('A', ('y', 'y', 'x')))))
    return syntax.Exists('x', rng.choice(choices))


# checks

def check_tn_soundness(rng, max_z=32):  # pylint: disable=unused-argument
    axioms = theories.tn_axioms()
    failures = []
    for z in range(max_z + 1):
        structure = models.cutoff_model(z)
        evaluator = models.Evaluator(structure)
        for index, axiom in enumerate(axioms, start=1):
            if not evaluator.satisfies(axiom):
                failures.append(f'N_{z} falsifies TN{index}')
        if not structure.holds('S', (z, z)):
            failures.append(f'N_{z} does not fix its maximum')
    return _report('tn-soundness', failures, max_z + 1)


def _examined(count, max_size):
    return f'{count} partial structures of size at most {max_size} examined'


def check_sigma_q(rng, true_count=50, false_count=20, z_bound=16, max_size=8, numerals=4, budget=20_000):
    failures, unknown = [], []
    numbers = models.NaturalNumbers(z_bound + 1)
    for _ in range(true_count):
        sigma = true_sigma(rng)
        if models.Evaluator(numbers).evaluate(translations.sigma_q(sigma)) is not True:
            failures.append(f'sigma^q false for true {syntax.to_text(sigma)}')
    r_instances = syntax.conjunction(theories.axioms('R', numerals))
    examined = 0
    for _ in range(false_count):
        sigma = false_sigma(rng)
        search = translations.search_counterexample(translations.sigma_q(sigma), r_instances, max_size, budget)
        examined += search.examined
        if search.counterexample is not None:
            failures.append(f'{search.counterexample.name} models sigma^q of {syntax.to_text(sigma)} but not R')
        elif not search.exhausted:
            unknown.append(f'sigma^q of {syntax.to_text(sigma)} after {search.examined} structures')
    return _report('sigma-q', failures, true_count + false_count, (_examined(examined, max_size),), unknown)


def check_witness_comparison(rng, pairs=30, max_size=8, budget=20_000):
    failures, unknown = [], []
    numbers = models.NaturalNumbers()
    examined = 0
    for _ in range(pairs):
        sigma, other = true_sigma(rng), true_sigma(rng)
        weak = translations.witness_compare(sigma, other, strict=False)
        reverse = translations.witness_compare(other, sigma, strict=True)
        search = translations.search_counterexample(
            translations.sigma_q(weak), syntax.Not(reverse), max_size, budget,
        )
        examined += search.examined
        if search.counterexample is not None:
            failures.append(f'{search.counterexample.name} models (s <= s\')^q and s\' < s for {syntax.to_text(weak)}')
        elif not search.exhausted:
            unknown.append(f'(s <= s\')^q against s\' < s for {syntax.to_text(weak)}')
        if not models.evaluate(numbers, weak):
            continue
        search = translations.search_counterexample(translations.sigma_q(reverse), syntax.BOT, max_size, budget)
        examined += search.examined
        if search.counterexample is not None:
            failures.append(f'{search.counterexample.name} models (s\' < s)^q although s <= s\' holds: '
                            f'{syntax.to_text(reverse)}')
        elif not search.exhausted:
            unknown.append(f'consistency of (s\' < s)^q for {syntax.to_text(reverse)}')
    return _report('witness-comparison', failures, pairs, (_examined(examined, max_size),), unknown)


def check_pullback(rng, triples=100, max_cutoff=5):
    failures = []
    for _ in range(triples):
        k = rng.randint(1, max_cutoff)
        structure = models.cutoff_model(k)
        if rng.random() < 0.5:
            translation, params = translations.identity(syntax.RELATIONAL_ARITHMETIC), ()
        else:
            translation, params = translations.cutoff_translation('p'), (rng.randint(0, k),)
        formula = random_formula(rng, _RELATIONAL, (), 2)
        outside = models.evaluate(
            structure, translations.apply(translation, formula), dict(zip(translation.params, params)),
        )
        inside = models.evaluate(translations.internal_model(structure, translation, params), formula)
        if outside != inside:
            failures.append(f'{translation.name} {params} in N_{k}: {syntax.to_text(formula)}')
    return _report('pullback', failures, triples)


def scat_assignments(structure, equiv, rng, count, variables=None, exhaustive=2):
    """
    Assignments of ``variables`` satisfying the guard of ``equiv``: one distinct class per block.

    Every such assignment is listed when at most ``exhaustive`` variables are
    assigned, otherwise ``count`` random ones. Blocks without an assigned
    variable still take up a class of their own.

    Returns:
        tuple: the assignments and whether they are all of them
    """
    labels = structure.labels
    sizes = sorted({label.n for label in labels})
    if len(equiv.blocks) > len(sizes):
        return [], True
    index = {label: i for i, label in enumerate(labels)}
    wanted = set(equiv.order if variables is None else variables)
    blocks = [block for block in (tuple(var for var in block if var in wanted) for block in equiv.blocks) if block]
    if sum(len(block) for block in blocks) <= exhaustive:
        result = []
        for chosen in itertools.permutations(sizes, len(blocks)):
            placements = [itertools.product(range(n), repeat=len(block)) for block, n in zip(blocks, chosen)]
            for positions in itertools.product(*placements):
                result.append({
                    var: index[models.ScatElement(n, m)]
                    for block, n, position in zip(blocks, chosen, positions)
                    for var, m in zip(block, position)
                })
        return result, True
    result = []
    for _ in range(count):
        chosen = rng.sample(sizes, len(equiv.blocks))
        assignment = {}
        for block, n in zip(equiv.blocks, chosen):
            for var in block:
                if var in wanted:
                    assignment[var] = index[models.ScatElement(n, rng.randrange(n))]
        result.append(assignment)
    return result, False


def check_scat_qe(rng, formulas=200, depth=2, max_vars=3, assignments=6):
    failures = []
    checked, complete = 0, 0
    for _ in range(formulas):
        variables = tuple(f'x{i}' for i in range(rng.randint(1, max_vars)))
        formula = random_formula(rng, _SCATTERED, variables, depth, bounded=False)
        bound = 2 * (len(variables) + depth) + 5
        structure = models.scat_model(bound)
        evaluator = models.Evaluator(structure)
        eliminator = scatqe.QuantifierEliminator(bound)
        for equiv in scatqe.all_equivalences(variables):
            checked += 1
            friendly = eliminator.eliminate(formula, equiv)
            try:
                scatqe.certify_friendly(friendly, equiv)
            except scatqe.NotFriendlyError as e:
                failures.append(f'{equiv}: {e}')
                continue
            used = formula.free_variables | friendly.free_variables
            listed, everything = scat_assignments(structure, equiv, rng, assignments, used)
            complete += everything
            for assignment in listed:
                expected = evaluator.evaluate(formula, {var: assignment[var] for var in formula.free_variables})
                got = evaluator.evaluate(friendly, {var: assignment[var] for var in friendly.free_variables})
                if expected != got:
                    failures.append(f'{equiv}: {syntax.to_text(formula)} differs at {assignment}')
                    break
    notes = (f'{complete} of {checked} equivalences checked on every assignment, '
             f'the others on {assignments} sampled ones',)
    return _report('scat-qe', failures, checked, notes)


def check_pa_scat(rng, bound=10, instances=6):  # pylint: disable=unused-argument
    evaluator = models.Evaluator(models.scat_model(bound))
    failures = [
        f'axiom {n} fails in scat_{bound}'
        for n, axiom in enumerate(theories.axioms('PA-scat', instances)) if not evaluator.satisfies(axiom)
    ]
    return _report('pa-scat', failures, instances + 1)


def order_structure(size):
    order = frozenset((x, y) for x in range(size) for y in range(size) if x < y)
    signature = syntax.Signature(relations=(('<', 2),))
    return models.FiniteStructure(size, signature, {'<': order}, name=f'order_{size}')


def check_back_and_forth(rng, steps=500):  # pylint: disable=unused-argument
    left = lindenbaum.ModelTheoryOracle(models.jan_model((1, 2)))
    right = lindenbaum.ModelTheoryOracle(order_structure(3))
    relation = lindenbaum.truth_matching_relation(left, right)
    try:
        state = lindenbaum.build_iso(relation, left, right, steps)
    except lindenbaum.IsoSearchError as e:
        return CheckReport('back-and-forth', False, 0, (str(e),))
    problems = lindenbaum.check_iso(state)
    listing = '\n'.join(f'{a} {b}' for a, b in state.pairs)
    digest = hashlib.sha256(listing.encode('utf-8')).hexdigest()[:16]
    return _report('back-and-forth', problems, state.steps, notes=(f'pair list digest {digest}',))


def check_jprop(rng, cutoff=3, sample=200):  # pylint: disable=unused-argument
    base = lindenbaum.ModelTheoryOracle(models.cutoff_model(cutoff))
    _, relation, fragment = lindenbaum.jprop(base)
    results = lindenbaum.verify_witness(relation, base, fragment, sample)
    failures = [f'{result.condition}: {result.counterexample}' for result in results if not result.passed]
    notes = [f'{result.condition} inconclusive' for result in results if result.inconclusive]
    return _report('jprop', failures, sample, notes)


_TOY_FAMILIES = ((0, 0), (1, 1), (2, 1), (2, 2), (4, 2))


def check_fixed_points(rng, families=_TOY_FAMILIES, witness_bound=10_000, nu_limit=23, nu_samples=500):
    failures, notes = [], []
    nu_checks = diagonal.check_nu(nu_limit, nu_samples, rng)
    failures.extend(f'nu disagrees with Sub at ({check.x}, {check.y})' for check in nu_checks if not check.passed)
    notes.append(f'nu checked on {len(nu_checks)} pairs of codes below {nu_limit}')
    for pi in (syntax.TOP, syntax.BOT, syntax.less('i', 'f')):
        result = diagonal.check_fixed_point(diagonal.fixed_point(pi), pi, witness_bound=witness_bound)
        if not result.agree:
            failures.append(f'pi={syntax.to_text(pi)}: j is {result.sentence_value}, '
                            f'triangle is {result.triangle_value}')
    for count, steps in families:
        pi = diagonal.pi_formula(count, steps)
        point = diagonal.fixed_point(pi)
        result = diagonal.check_fixed_point(point, pi, count, witness_bound)
        if not result.agree:
            failures.append(f'U_0..U_{count - 1} within {steps} steps: j is {result.sentence_value}, '
                            f'triangle is {result.triangle_value}')
        notes.append(f'{count} theories, {steps} steps: j={result.sentence_value}, in N_i {result.consistent_with}')
    report = diagonal.rosser_demo()
    sides = translations.split_comparison(report.rho.sentence)
    if sides is None or sides[2]:
        failures.append('rho is not a strict witness comparison')
    else:
        for side in sides[:2]:
            if syntax.classify(side) != syntax.Purity.ONE_SIGMA1:
                failures.append(f'rho side is not pure 1-Sigma1: {syntax.to_text(side)[:80]}')
    if report.in_theorems or report.in_refutables:
        failures.append('rho is listed among the theorems or refutables')
    return _report('fixed-point', failures, len(nu_checks) + len(families) + 4, notes)


def check_km(rng, ns=range(5), fuel=10_000):  # pylint: disable=unused-argument
    expected = {'evens': None, 'empty': 'Km0-W', 'all': 'Km1&W'}
    failures = []
    for name, disjunct in expected.items():
        for verdict in recursion.separation_demo(recursion.SAMPLE_PROGRAMS[name], ns, fuel):
            if verdict.disjunct is None or (disjunct is not None and verdict.disjunct != disjunct):
                failures.append(f'{name}, n={verdict.n}: {verdict.disjunct}')
    return _report('km', failures, 3 * len(ns))


CHECKS = {
    'tn-soundness': check_tn_soundness,
    'sigma-q': check_sigma_q,
    'witness-comparison': check_witness_comparison,
    'pullback': check_pullback,
    'scat-qe': check_scat_qe,
    'pa-scat': check_pa_scat,
    'back-and-forth': check_back_and_forth,
    'jprop': check_jprop,
    'fixed-point': check_fixed_points,
    'km': check_km,
}


def run_check(name, seed=0, **params):
    try:
        check = CHECKS[name]
    except KeyError:
        raise ValueError(f'unknown check {name!r}, expected one of {", ".join(CHECKS)}') from None
    rng = random.Random(f'{seed}:{name}')
    logger.debug('running %s', name)
    return check(rng, **params)


def run_suite(seed=0, names=None):
    """Run the named checks (all by default) and return their reports in order."""
    names = list(names or CHECKS)
    workers = limits.get_workers()
    if workers == 1:
        return [run_check(name, seed) for name in names]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda name: run_check(name, seed), names))


def summary(reports):
    return '\n'.join(report.text() for report in reports) + '\n'


def archive(reports):
    """A zip stream with one text entry per report and a summary."""
    stream = zipstream.ZipFile(mode='w', compression=zipstream.ZIP_DEFLATED)
    for index, report in zip(itertools.count(1), reports):
        stream.write_iter(
            arcname=f'{index:02d}-{report.name}.txt',
            iterable=iter([(report.text() + '\n').encode('utf-8')]),
            compress_type=zipstream.ZIP_DEFLATED,
        )
    stream.write_iter(
        arcname='summary.txt',
        iterable=iter([summary(reports).encode('utf-8')]),
        compress_type=zipstream.ZIP_DEFLATED,
    )
    return stream


def write_archive(reports, path):
    with open(path, 'wb') as handle:
        for chunk in archive(reports):
            handle.write(chunk)
