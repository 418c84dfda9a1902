"""Axiom streams for the theories used across the workbench.

Every infinite scheme is cut at an explicit bound; the streams are
restartable, each iteration starting afresh.
"""
import dataclasses
import itertools
import logging
from typing import Callable, Iterator, Optional

from . import limits
from . import parsing
from . import syntax


logger = logging.getLogger(__name__)


class UnknownTheoryError(ValueError):
    """Raised when a theory name is not registered."""


@dataclasses.dataclass(frozen=True)
class AxiomStream:
    """
    A named, restartable enumeration of sentences.

    Args:
        name (str): theory name
        signature (Signature): the signature of every emitted sentence
        generate (callable): returns a fresh iterator over the axioms
        bound (int): the scheme bound, None for finitely axiomatised theories
    """
    name: str
    signature: syntax.Signature
    generate: Callable[[], Iterator[syntax.Formula]]
    bound: Optional[int] = None

    def __iter__(self):
        return iter(self.generate())

    def take(self, n):
        return list(itertools.islice(self, n))

    @property
    def finite(self):
        return self.bound is None

    def conjunction(self):
        if not self.finite:
            raise ValueError(f'{self.name} is a scheme, take a bounded prefix instead')
        return syntax.conjunction(self)


# TN

TN_TEXTS = (
    'A x. ~x < 0',
    'A x. A y. A z. ((x < y & y < z) -> x < z)',
    'A x. A y. (x < y | (x = y | y < x))',
    'A x. (x = 0 | (E y. x = S(y)))',
    'A x. ~S(x) < x',
    'A x. A y. (x < y -> (x < S(x) & ~y < S(x)))',
    'A x. (x + 0) = x',
    'A x. A y. (x + S(y)) = S((x + y))',
    'A x. (x * 0) = 0',
    'A x. A y. (x * S(y)) = ((x * y) + x)',
)


def tn_axioms():
    return [parsing.parse(text) for text in TN_TEXTS]


# R

def _equation(left, right):
    return syntax.Atom('=', (left, right))


def r1_axiom(m, n):
    return _equation(syntax.App('A', (syntax.num(m), syntax.num(n))), syntax.num(m + n))


def r2_axiom(m, n):
    return _equation(syntax.App('M', (syntax.num(m), syntax.num(n))), syntax.num(m * n))


def r3_axiom(m, n):
    if m == n:
        raise ValueError(f'R3 needs distinct numerals, got {m} twice')
    return syntax.Not(_equation(syntax.num(m), syntax.num(n)))


def r4_axiom(n):
    """``A x. (x < n -> (x = 0 | ... | x = n - 1))``"""
    cases = syntax.disjunction(_equation('x', syntax.num(i)) for i in range(n))
    return syntax.Forall('x', syntax.Implies(syntax.Atom('<', ('x', syntax.num(n))), cases))


def r5_axiom(n):
    numeral = syntax.num(n)
    return syntax.Forall('x', syntax.disjunction([
        syntax.Atom('<', ('x', numeral)), _equation('x', numeral), syntax.Atom('<', (numeral, 'x')),
    ]))


def _pairs(bound):
    return itertools.product(range(bound + 1), repeat=2)


def _r_schemes(bound):
    return {
        'R1': lambda: (r1_axiom(m, n) for m, n in _pairs(bound)),
        'R2': lambda: (r2_axiom(m, n) for m, n in _pairs(bound)),
        'R3': lambda: (r3_axiom(m, n) for m, n in _pairs(bound) if m != n),
        'R4': lambda: (r4_axiom(n) for n in range(bound + 1)),
        'R5': lambda: (r5_axiom(n) for n in range(bound + 1)),
    }


# Jan

def _e(left, right):
    return syntax.Atom('E', (left, right))


def _distinct(variables):
    return [syntax.Not(syntax.Atom('=', (a, b))) for a, b in itertools.combinations(variables, 2)]


def class_at_least(x, n, avoid=()):
    """The class of ``x`` has at least ``n`` elements."""
    if n <= 0:
        return syntax.TOP
    names = syntax.FreshNames(set(avoid) | {x})
    members = [names('y') for _ in range(n)]
    return syntax.exists_block(members, syntax.conjunction([_e(x, y) for y in members] + _distinct(members)))


def class_exactly(x, n, avoid=()):
    return syntax.And(class_at_least(x, n, avoid), syntax.Not(class_at_least(x, n + 1, avoid)))


def j1_axioms():
    return [
        parsing.parse('A x. E(x, x)'),
        parsing.parse('A x. A y. (E(x, y) -> E(y, x))'),
        parsing.parse('A x. A y. A z. ((E(x, y) & E(y, z)) -> E(x, z))'),
    ]


def j2_axiom(n):
    """At most one equivalence class of size precisely ``n``."""
    both = syntax.And(class_exactly('x', n, {'u'}), class_exactly('u', n, {'x'}))
    return syntax.forall_block(('x', 'u'), syntax.Implies(both, _e('x', 'u')))


def j3_axiom(n):
    """At least ``n`` equivalence classes with at least ``n`` elements."""
    anchors = [f'x{i}' for i in range(n)]
    apart = [syntax.Not(_e(a, b)) for a, b in itertools.combinations(anchors, 2)]
    large = [class_at_least(x, n, anchors) for x in anchors]
    return syntax.exists_block(anchors, syntax.conjunction(apart + large))


def a_sentence(n):
    """There is an equivalence class of size precisely ``n + 1``."""
    return syntax.Exists('x', class_exactly('x', n + 1))


def _jan(bound):
    yield from j1_axioms()
    for n in range(1, bound + 1):
        yield j2_axiom(n)
        yield j3_axiom(n)


def jan_instance_report(structure, bound):
    """Map each J1, J2_n and J3_n instance name (n <= ``bound``) to its truth value in ``structure``."""
    from . import models  # pylint: disable=import-outside-toplevel

    evaluator = models.Evaluator(structure)
    report = {f'J1.{i}': evaluator.satisfies(axiom) for i, axiom in enumerate(j1_axioms(), start=1)}
    for n in range(1, bound + 1):
        report[f'J2_{n}'] = evaluator.satisfies(j2_axiom(n))
        report[f'J3_{n}'] = evaluator.satisfies(j3_axiom(n))
    return report


# Scattered arithmetic

def numeral_sentence(n):
    """``E z. z = n`` in pure 1-Sigma1 form."""
    return syntax.Exists('z', syntax.numeral_formula(n, 'z'))


def n_tilde(n, parameter='a'):
    """
    ``(E z. z = n)^q`` with zero read as ``parameter``, plus 'there are at least
    ``n`` elements' above ``parameter``.
    """
    from . import translations  # pylint: disable=import-outside-toplevel

    shifted = translations.sigma_q(numeral_sentence(n), parameter=parameter)
    names = syntax.FreshNames(shifted.variables | {parameter})
    members = [names('y') for _ in range(n)]
    above = [syntax.less_equal(parameter, y) for y in members]
    count = syntax.exists_block(members, syntax.conjunction(above + _distinct(members))) if members else syntax.TOP
    return syntax.smart_and(shifted, count)


def pa_scat_axiom(n):
    return syntax.Exists('a', n_tilde(n, 'a'))


def exists_unique(var, formula):
    other = syntax.fresh_variable(f'{var}1', formula.variables)
    same = syntax.substitute(formula, {var: other})
    unique = syntax.Forall(other, syntax.Implies(same, syntax.Atom('=', (other, var))))
    return syntax.Exists(var, syntax.And(formula, unique))


def pa_scat_unique_axiom(n):
    """``E!x. sigma^q*(x)`` for ``sigma = E z. z = n``."""
    from . import translations  # pylint: disable=import-outside-toplevel

    return exists_unique('x', translations.sigma_q(numeral_sentence(n), variant='star', parameter='x'))


def r_succ_axiom(m, n):
    return r3_axiom(m, n)


# Registry

def _stream(name, signature, generate, bound=None):
    return AxiomStream(name=name, signature=signature, generate=generate, bound=bound)


def axioms(theory, bound=None):
    """
    Return the axiom stream of ``theory``.

    Args:
        theory (str): one of ``TN``, ``R1`` .. ``R5``, ``R``, ``Jan``, ``A``,
            ``PA-scat``, ``PA-scat!``, ``R_succ``
        bound (int): the scheme bound (numerals, class sizes or indices), ignored by TN

    Raises:
        UnknownTheoryError: for an unregistered name
        ValueError: when ``bound`` is above the configured ceiling
    """
    if theory == 'TN':
        return _stream('TN', syntax.ARITHMETIC, tn_axioms)
    bound = limits.check_bound('scheme bound', bound, limits.get_scheme_bound)
    schemes = _r_schemes(bound)
    if theory in schemes:
        return _stream(theory, syntax.ARITHMETIC, schemes[theory], bound)
    if theory == 'R':
        return _stream('R', syntax.ARITHMETIC, lambda: itertools.chain.from_iterable(
            generate() for generate in schemes.values()), bound)
    if theory == 'Jan':
        return _stream('Jan', syntax.JAN, lambda: _jan(bound), bound)
    if theory == 'A':
        return _stream('A', syntax.JAN, lambda: (a_sentence(n) for n in range(bound + 1)), bound)
    if theory == 'PA-scat':
        return _stream('PA-scat', syntax.SCATTERED, lambda: (pa_scat_axiom(n) for n in range(bound + 1)), bound)
    if theory == 'PA-scat!':
        return _stream(
            'PA-scat!', syntax.SCATTERED, lambda: (pa_scat_unique_axiom(n) for n in range(bound + 1)), bound,
        )
    if theory == 'R_succ':
        return _stream('R_succ', syntax.SUCCESSOR, lambda: (
            r_succ_axiom(m, n) for m, n in _pairs(bound) if m != n), bound)
    raise UnknownTheoryError(f'unknown theory {theory!r}, expected one of {", ".join(THEORY_NAMES)}')


THEORY_NAMES = ('TN', 'R1', 'R2', 'R3', 'R4', 'R5', 'R', 'Jan', 'A', 'PA-scat', 'PA-scat!', 'R_succ')


# Theory constructors

def _rename_apart(signature, taken):
    mapping = {}
    used = set(taken) | set(signature.symbols)
    for symbol in signature.symbols:
        if symbol in taken:
            stem = 'Lt' if symbol == '<' else symbol
            new = syntax.fresh_variable(f'{stem}1', used)
            used.add(new)
            mapping[symbol] = new
    return mapping


def combine(left, right, mode, guard='P'):
    """
    Build ``left`` ovee ``right`` or ``left`` box ``right``.

    The right stream's symbols are renamed apart from the left ones. ``ovee``
    interleaves ``guard -> phi`` and ``~guard -> psi``; ``box`` emits ``phi | psi``
    over diagonal index pairs.

    Raises:
        ValueError: for an unknown mode or a guard name already in use
    """
    mapping = _rename_apart(right.signature, left.signature.symbols)
    right_signature = right.signature.renamed(mapping)
    signature = left.signature.union(right_signature)

    def renamed():
        return (syntax.rename_symbols(axiom, mapping) for axiom in right)

    if mode == 'ovee':
        if guard in signature.symbols:
            raise ValueError(f'guard {guard} clashes with the combined signature')
        proposition = syntax.Atom(guard, ())
        signature = syntax.Signature(
            relations=signature.relations + ((guard, 0),), functions=signature.functions, constants=signature.constants,
        )

        def generate():
            guarded = (syntax.Implies(proposition, axiom) for axiom in left)
            unguarded = (syntax.Implies(syntax.Not(proposition), axiom) for axiom in renamed())
            for pair in itertools.zip_longest(guarded, unguarded):
                yield from (axiom for axiom in pair if axiom is not None)
        name = f'({left.name} ovee {right.name})'
    elif mode == 'box':
        def generate():
            return (syntax.Or(phi, psi) for phi, psi in _diagonal(iter(left), renamed()))
        name = f'({left.name} box {right.name})'
    else:
        raise ValueError(f'unknown combination mode {mode!r}, expected ovee or box')
    bound = None if left.finite and right.finite else max(left.bound or 0, right.bound or 0)
    return _stream(name, signature, generate, bound)


def _diagonal(first, second):
    """Pairs of items of two iterators ordered by the sum of their indices."""
    seen = ([], [])
    sources = [first, second]
    done = [False, False]

    def available(side, index):
        while len(seen[side]) <= index and not done[side]:
            try:
                seen[side].append(next(sources[side]))
            except StopIteration:
                done[side] = True
        return index < len(seen[side])

    for total in itertools.count():
        if done[0] and done[1] and total > len(seen[0]) + len(seen[1]):
            return
        for i in range(total + 1):
            if available(0, i) and available(1, total - i):
                yield seen[0][i], seen[1][total - i]
