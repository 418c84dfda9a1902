"""Substitution on codes and the fixed point constructions built on it.

``Sub`` is executable on codes. Fixed point templates use the graph atoms
``Sub(x, y, z)`` and ``Neg(z, f)``, which a :class:`CodedStructure` evaluates by
running the substitution and the negation on codes. The pure table formula
``nu(w, x, y, z)`` defines the same graph over the codes below a limit.
"""
import dataclasses
import itertools
import logging
import random
from typing import Callable, NamedTuple, Optional, Tuple

from . import godel
from . import models
from . import syntax
from . import translations


logger = logging.getLogger(__name__)

SIGNATURE = syntax.CODED_ARITHMETIC
ONE_VARIABLE = 'v0'
NU_NAMES = ('w', 'x', 'y', 'z')
PI_NAMES = ('i', 'p', 'f')


def identity(sentence):
    return sentence


def plug(formula, var, value):
    """``formula[var := value]``, renormalised to pure 1-Sigma1 form when it is Sigma1 shaped."""
    try:
        return syntax.substitute_numeral(formula, var, value)
    except syntax.PurityError:
        names = syntax.FreshNames(formula.variables)
        holder = names('v')
        body = syntax.substitute(formula, {var: holder})
        return syntax.Exists(holder, syntax.And(syntax.numeral_formula(value, holder, names.used), body))


def sub_formula(formula, value, var=ONE_VARIABLE):
    """Plug ``value`` into ``formula``; both sides of a witness comparison are plugged and compared again."""
    parts = translations.split_comparison(formula, closed=False)
    if parts is not None:
        alpha, beta, strict = parts
        try:
            return translations.witness_compare(plug(alpha, var, value), plug(beta, var, value), strict)
        except syntax.PurityError:
            logger.debug('comparison sides are not pure, plugging the whole formula')
    return plug(formula, var, value)


def sub_sentence(x, y, signature=SIGNATURE):
    """The sentence obtained by plugging ``y`` into the one variable formula coded ``x``."""
    return sub_formula(godel.decode1(x, signature), y)


def sub(x, y, signature=SIGNATURE):
    """Code of :func:`sub_sentence`."""
    return godel.encode(sub_sentence(x, y, signature), signature)


def negation_code(sentence, transform=identity, signature=SIGNATURE):
    return godel.encode(syntax.Not(transform(sentence)), signature)


class CodedStructure:
    """
    ``structure`` extended by the graphs ``Sub(x, y, z)``, ``z = Sub(x, y)``,
    and ``Neg(z, f)``, ``f = code(~transform(decode(z)))``.

    Outputs are computed on demand and cached. In a finite structure an
    output outside the universe makes the atom false.
    """

    def __init__(self, structure, transform=identity, signature=SIGNATURE):
        self.structure = structure
        self.transform = transform
        self.signature = signature
        self._outputs = {}
        self._sentences = {}

    def __getattr__(self, name):
        if name == 'structure':
            raise AttributeError(name)
        return getattr(self.structure, name)

    def output(self, symbol, inputs):
        key = (symbol, tuple(inputs))
        if key not in self._outputs:
            if symbol == 'Sub':
                sentence = sub_sentence(*inputs, signature=self.signature)
                code = godel.encode(sentence, self.signature)
                self._sentences[code] = sentence
            else:
                sentence = self._sentences.get(inputs[0])
                if sentence is None:
                    sentence = godel.decode(inputs[0], self.signature)
                code = negation_code(sentence, self.transform, self.signature)
            self._outputs[key] = code
        return self._outputs[key]

    def _inside(self, value):
        size = getattr(self.structure, 'size', None)
        return size is None or value < size

    def holds(self, symbol, args):
        if syntax.CODED_ARITIES.get(symbol) == len(args):
            return self.output(symbol, args[:-1]) == args[-1]
        return self.structure.holds(symbol, args)

    def graph_candidates(self, symbol, inputs):
        if syntax.CODED_ARITIES.get(symbol) == len(inputs) + 1:
            value = self.output(symbol, inputs)
            return frozenset([value]) if self._inside(value) else frozenset()
        return self.structure.graph_candidates(symbol, inputs)


def _balanced(kind, formulas):
    if len(formulas) == 1:
        return formulas[0]
    middle = len(formulas) // 2
    return kind(_balanced(kind, formulas[:middle]), _balanced(kind, formulas[middle:]))


def table_formula(rows, names, avoid=()):
    """Pure Delta0 formula in ``names`` true exactly at the tuples listed in ``rows``."""
    used = set(names) | set(avoid)
    entries = []
    for row in rows:
        entries.append(syntax.conjunction(
            syntax.numeral_formula(value, name, used) for value, name in zip(row, names)
        ))
    return _balanced(syntax.Or, entries) if entries else syntax.BOT


def sub_table(limit):
    return [(x, y, sub(x, y)) for x, y in itertools.product(range(limit), repeat=2)]


def nu_formula(limit, names=NU_NAMES, table=None):
    """
    ``nu(w, x, y, z)``: ``z`` is ``Sub(x, y)`` for codes ``x, y`` below ``limit``,
    and the witness ``w`` exceeds ``x``, ``y`` and ``z``.
    """
    w, x, y, z = names
    majorised = syntax.conjunction(syntax.less(var, w) for var in (x, y, z))
    rows = sub_table(limit) if table is None else table
    return syntax.And(majorised, table_formula(rows, (x, y, z), avoid=(w,)))


class NuCheck(NamedTuple):
    x: int
    y: int
    z: int
    holds: bool
    rejects_other: bool
    majorised: bool

    @property
    def passed(self):
        return self.holds and self.rejects_other and self.majorised


def check_nu(limit, samples=None, rng=None, names=NU_NAMES):
    """
    Compare ``nu`` with executable ``Sub`` on the pairs of codes below ``limit``,
    or on ``samples`` of them drawn without replacement.
    """
    table = sub_table(limit)
    nu = nu_formula(limit, names, table)
    if samples is not None and samples < len(table):
        table = sorted((rng or random.Random(0)).sample(table, samples))
    evaluator = models.Evaluator(models.NaturalNumbers())
    w, x, y, z = names
    checks = []
    for a, b, c in table:
        top = max(a, b, c)
        holds = evaluator.evaluate(nu, {w: top + 1, x: a, y: b, z: c})
        other = evaluator.evaluate(nu, {w: top + 2, x: a, y: b, z: c + 1})
        tight = evaluator.evaluate(nu, {w: top, x: a, y: b, z: c})
        checks.append(NuCheck(a, b, c, holds is True, other is False, tight is False))
    logger.debug('checked nu on %d of %d pairs', len(checks), limit * limit)
    return checks


# toy theories Th(N_i)

def _listing(i, steps, signature, wanted):
    evaluator = models.Evaluator(CodedStructure(models.cutoff_model(i), signature=signature))
    listing = []
    for code in itertools.count():
        if len(listing) == steps:
            return listing
        if evaluator.satisfies(godel.decode(code, signature)) is wanted:
            listing.append(code)
    raise AssertionError('unreachable')


def theory_listing(i, steps, signature=SIGNATURE):
    """Codes of the first ``steps`` sentences true in the cutoff model ``N_i``, in code order."""
    return _listing(i, steps, signature, True)


def refuted_listing(i, steps, signature=SIGNATURE):
    """Codes of the first ``steps`` sentences false in ``N_i``."""
    return _listing(i, steps, signature, False)


def theory_table(count, steps):
    """Rows ``(i, p, code)``: Th(N_i) lists the sentence ``code`` at step ``p``."""
    return [(i, p, code) for i in range(count) for p, code in enumerate(theory_listing(i, steps))]


def pi_formula(count, steps, names=PI_NAMES):
    """``pi(i, p, f)``: the toy theory U_i = Th(N_i) lists ``f`` at step ``p``."""
    return table_formula(theory_table(count, steps), names)


def _check_pi(pi, names):
    stray = pi.free_variables - set(names)
    if stray:
        raise ValueError(f'pi has unexpected free variables {sorted(stray)}')


def triangle_formula(pi, names=PI_NAMES):
    """``E u. E i<u. E p<u. pi(i, p, f)`` with ``f`` free."""
    _check_pi(pi, names)
    i, p, _ = names
    u = syntax.fresh_variable('u', pi.variables | set(names))
    return syntax.Exists(u, syntax.BExists(i, u, True, syntax.BExists(p, u, True, pi)))


def triangle(pi, sentence, names=PI_NAMES):
    """The pure 1-Sigma1 sentence ``triangle_formula(pi)`` at the code of ``sentence``."""
    return plug(triangle_formula(pi, names), names[2], godel.encode(sentence, SIGNATURE))


@dataclasses.dataclass(frozen=True)
class FixedPoint:
    sentence: syntax.Formula
    template: syntax.Formula
    template_code: int
    certificate: syntax.PurityCertificate
    transform: Callable[[syntax.Formula], syntax.Formula]


def fixed_point(pi, transform=identity, names=PI_NAMES):
    """
    A pure 1-Sigma1 sentence ``j`` built by substitution, standing for ``triangle(~transform(j))``.

    The template is
    ``psi(v) = E u. E z<u. E f<u. E i<u. E p<u. (Sub(v, v, z) & Neg(z, f) & pi(i, p, f))``
    and ``j = Sub(psi, psi)``. ``Neg`` reads ``transform``, so ``j`` is evaluated
    in a :class:`CodedStructure` carrying the same transform.
    """
    _check_pi(pi, names)
    i, p, f = names
    fresh = syntax.FreshNames(pi.variables | set(names))
    v, u, z = (fresh(stem) for stem in ('v', 'u', 'z'))
    matrix = syntax.conjunction([syntax.Atom('Sub', (v, v, z)), syntax.Atom('Neg', (z, f)), pi])
    for var in (p, i, f, z):
        matrix = syntax.BExists(var, u, True, matrix)
    template = syntax.Exists(u, matrix)
    template_code = godel.encode1(template, var=v, signature=SIGNATURE)
    sentence = sub_sentence(template_code, template_code)
    certificate = syntax.certify(sentence)
    if certificate.kind != syntax.Purity.ONE_SIGMA1:
        raise syntax.PurityError(f'fixed point is {certificate.kind.value}')
    logger.debug('fixed point of size %d from a template coded with %d bits', syntax.size(sentence),
                 template_code.bit_length())
    return FixedPoint(sentence, template, template_code, certificate, transform)


class FixedPointCheck(NamedTuple):
    sentence_value: Optional[bool]
    triangle_value: Optional[bool]
    consistent_with: Tuple[Optional[bool], ...]

    @property
    def agree(self):
        return self.sentence_value == self.triangle_value


def check_fixed_point(point, pi, count=0, witness_bound=None, names=PI_NAMES):
    """
    Evaluate ``j`` and ``triangle(~transform(j))`` over the natural numbers,
    and ``transform(j)`` in ``N_0 .. N_{count-1}``.

    The triangle side is evaluated as ``triangle_formula(pi)`` at the code of
    ``~transform(j)``, which its numeral defines.
    """
    numbers = models.Evaluator(CodedStructure(models.NaturalNumbers(witness_bound), point.transform))
    sentence_value = numbers.evaluate(point.sentence)
    code = negation_code(point.sentence, point.transform)
    triangle_value = numbers.evaluate(triangle_formula(pi, names), {names[2]: code})
    image = point.transform(point.sentence)
    consistent = tuple(
        models.evaluate(CodedStructure(models.cutoff_model(i), point.transform), image) for i in range(count)
    )
    return FixedPointCheck(sentence_value, triangle_value, consistent)


# Rosser

@dataclasses.dataclass(frozen=True)
class RosserSentence:
    template: syntax.Formula
    sentence: syntax.Formula
    template_code: int

    @property
    def sides(self):
        alpha, beta, _ = translations.split_comparison(self.sentence)
        return alpha, beta


def rosser_rho(delta0, delta1, names=('u', 'x')):
    """
    Build ``phi(v)`` comparing the first appearance of ``Sub(v, v)`` in X1 (via
    ``delta1``) with its first appearance in X0 (via ``delta0``), and
    ``rho = Sub(phi, phi)``, a strict witness comparison ``rho1 < rho0``.
    """
    u, x = names
    for delta in (delta0, delta1):
        if not syntax.is_pure_delta0(delta):
            raise syntax.PurityError(f'not a pure bounded formula: {syntax.to_text(delta)[:120]}')
        stray = delta.free_variables - set(names)
        if stray:
            raise ValueError(f'delta has unexpected free variables {sorted(stray)}')
    fresh = syntax.FreshNames(delta0.variables | delta1.variables | set(names))
    v, z, a, b = (fresh(stem) for stem in ('v', 'z', 'a', 'b'))

    def side(bound, delta):
        found = syntax.BExists(u, bound, True, syntax.substitute(delta, {x: z}))
        return syntax.Exists(bound, syntax.BExists(z, bound, True, syntax.And(syntax.Atom('Sub', (v, v, z)), found)))

    template = translations.witness_compare(side(a, delta1), side(b, delta0), strict=True, closed=False)
    template_code = godel.encode1(template, var=v, signature=SIGNATURE)
    sentence = sub_formula(template, template_code, var=v)
    return RosserSentence(template, sentence, template_code)


class RosserReport(NamedTuple):
    rho: RosserSentence
    code: int
    in_theorems: bool
    in_refutables: bool


def rosser_demo(i=2, steps=4):
    """
    Rosser sentence for X0 the first theorems and X1 the first refutables of
    Th(N_i), and whether its code shows up in either listing.
    """
    theorems, refutables = theory_listing(i, steps), refuted_listing(i, steps)
    delta0 = table_formula(list(enumerate(theorems)), ('u', 'x'))
    delta1 = table_formula(list(enumerate(refutables)), ('u', 'x'))
    rho = rosser_rho(delta0, delta1)
    code = godel.encode(rho.sentence, SIGNATURE)
    return RosserReport(rho, code, code in theorems, code in refutables)
