"""Translations between first-order languages, and the constructions built from them.

A translation maps each source symbol to a defining formula over formal
variables: ``x<i>`` for the i-th argument of a one dimensional translation,
``x<i>_<j>`` for the j-th component otherwise. Parameters are free variables
shared by every defining formula.
"""
import dataclasses
import functools
import itertools
import json
import logging
from typing import Dict, NamedTuple, Optional, Tuple

from . import models
from . import parsing
from . import syntax
from . import theories


logger = logging.getLogger(__name__)

SIGNATURES = {
    'arithmetic': syntax.ARITHMETIC,
    'relational-arithmetic': syntax.RELATIONAL_ARITHMETIC,
    'scattered': syntax.SCATTERED,
    'jan': syntax.JAN,
    'successor': syntax.SUCCESSOR,
}


class TranslationError(ValueError):
    """Raised for malformed translations and failed internal model constructions."""


class CongruenceError(TranslationError):
    """Raised when the congruence is not an equivalence compatible with the defined relations."""


def formal(index, component, dimension):
    return f'x{index}' if dimension == 1 else f'x{index}_{component}'


@dataclasses.dataclass(frozen=True)
class Translation:
    """
    A (possibly more dimensional, possibly parametrised) relative translation.

    Args:
        source (Signature): the interpreted language, functions are read through their graphs
        target (Signature): the interpreting language
        dimension (int): number of target variables per source variable
        params (tuple): parameter variable names
        domain (Formula): domain formula over block 0
        defs (dict): source relation symbol to its defining formula over the formal blocks
        congruence (Formula): formula over blocks 0 and 1 standing for identity, None for identity itself
        domain_bound (tuple): ``(param, strict)`` when the domain is exactly ``x0 < param`` or ``x0 <= param``
        name (str): a short description
    """
    source: syntax.Signature
    target: syntax.Signature
    dimension: int = 1
    params: Tuple[str, ...] = ()
    domain: syntax.Formula = syntax.TOP
    defs: Dict[str, syntax.Formula] = dataclasses.field(default_factory=dict)
    congruence: Optional[syntax.Formula] = None
    domain_bound: Optional[Tuple[str, bool]] = None
    name: str = ''

    def __post_init__(self):
        if self.dimension < 1:
            raise TranslationError(f'dimension must be at least 1, got {self.dimension}')
        params = set(self.params)
        for symbol, arity in self.source_relations:
            if symbol not in self.defs:
                raise TranslationError(f'no defining formula for {symbol}')
            allowed = set(itertools.chain.from_iterable(self.formals(i) for i in range(arity))) | params
            extra = self.defs[symbol].free_variables - allowed
            if extra:
                raise TranslationError(f'defining formula of {symbol} has stray variables {sorted(extra)}')
        if self.domain.free_variables - (set(self.formals(0)) | params):
            raise TranslationError('the domain formula may only use block 0 and the parameters')
        if self.congruence is not None:
            if self.congruence.free_variables - (set(self.formals(0)) | set(self.formals(1)) | params):
                raise TranslationError('the congruence formula may only use blocks 0, 1 and the parameters')

    @functools.cached_property
    def source_relations(self):
        return self.source.relational().relations

    def formals(self, index):
        return tuple(formal(index, j, self.dimension) for j in range(self.dimension))

    def block(self, var):
        if self.dimension == 1:
            return (var,)
        return tuple(f'{var}_{j}' for j in range(self.dimension))

    @functools.cached_property
    def order_preserving(self):
        """True when ``<`` is translated to itself, so bounded quantifiers stay bounded."""
        return (
            self.dimension == 1
            and self.congruence is None
            and self.defs.get('<') == syntax.Atom('<', ('x0', 'x1'))
        )

    def instantiate(self, formula, blocks):
        """Plug the variable blocks ``blocks[i]`` in for the formal block ``i`` of ``formula``."""
        mapping = {}
        for index, block in enumerate(blocks):
            for formal_var, actual in zip(self.formals(index), block):
                mapping[formal_var] = actual
        return syntax.substitute(formula, mapping)

    def equality(self, left, right):
        if self.congruence is not None:
            return self.instantiate(self.congruence, (left, right))
        return syntax.conjunction(syntax.Atom('=', (a, b)) for a, b in zip(left, right))

    def guard(self, var):
        return self.instantiate(self.domain, (self.block(var),))


def identity(signature):
    """The identity translation of ``signature``."""
    relational = signature.relational()
    defs = {
        symbol: syntax.Atom(symbol, tuple(formal(i, 0, 1) for i in range(arity)))
        for symbol, arity in relational.relations
    }
    return Translation(signature, relational, defs=defs, name='id')


def cutoff_translation(param='z'):
    """
    tr(z): arithmetic on the numbers below ``param``, with successor, sum and
    product cut off at ``param``.
    """
    at_most = syntax.less_equal

    def clipped(symbol, inputs, output):
        value = syntax.fresh_variable('v', set(inputs) | {output, param})
        exact = syntax.And(syntax.Atom(symbol, inputs + (output,)), at_most(output, param))
        fits = syntax.BExists(value, param, False, syntax.Atom(symbol, inputs + (value,)))
        return syntax.Or(exact, syntax.And(syntax.Not(fits), syntax.Atom('=', (output, param))))

    defs = {
        'Z': syntax.Atom('Z', ('x0',)),
        'S': clipped('S', ('x0',), 'x1'),
        'A': clipped('A', ('x0', 'x1'), 'x2'),
        'M': clipped('M', ('x0', 'x1'), 'x2'),
        '<': syntax.Atom('<', ('x0', 'x1')),
    }
    return Translation(
        syntax.ARITHMETIC, syntax.RELATIONAL_ARITHMETIC, params=(param,), domain=at_most('x0', param),
        defs=defs, domain_bound=(param, False), name=f'tr({param})',
    )


def zero_parameter_translation(param='x', target=syntax.SCATTERED):
    """Read zero as ``param`` and restrict the domain to the elements above it."""
    defs = {
        'Z': syntax.Atom('=', ('x0', param)),
        'S': syntax.Atom('S', ('x0', 'x1')),
        'A': syntax.Atom('A', ('x0', 'x1', 'x2')),
        'M': syntax.Atom('M', ('x0', 'x1', 'x2')),
        '<': syntax.Atom('<', ('x0', 'x1')),
    }
    return Translation(
        syntax.RELATIONAL_ARITHMETIC, target, params=(param,), domain=syntax.less_equal(param, 'x0'), defs=defs,
        name=f'zero:={param}',
    )


def _has_function_terms(formula):
    return any(
        isinstance(node, syntax.Atom) and not all(syntax.is_variable(arg) for arg in node.args)
        for node in syntax.iter_nodes(formula)
    )


def apply(translation, formula):
    """
    Translate ``formula``: connectives are kept, quantifiers are relativised
    to the domain, atoms are replaced by their defining formulas and equality
    by the congruence.

    Raises:
        TranslationError: when a free variable is a parameter, or a symbol has no definition
    """
    params = set(translation.params)
    if formula.free_variables & params:
        raise TranslationError(f'free variables {sorted(formula.free_variables & params)} are parameters')
    if _has_function_terms(formula):
        formula = syntax.relationalize(formula)
    formula = syntax.rename_bound(formula, params)
    if translation.dimension > 1:
        blocks = set(itertools.chain.from_iterable(translation.block(var) for var in formula.variables))
        clash = blocks & (formula.variables | params)
        if clash:
            raise TranslationError(f'block variables {sorted(clash)} already occur')
    return _translate(translation, formula)


def _translate(translation, node):
    if isinstance(node, (syntax.Bot, syntax.Top)):
        return node
    if isinstance(node, syntax.Atom):
        blocks = tuple(translation.block(arg) for arg in node.args)
        if node.symbol == '=' and len(blocks) == 2:
            return translation.equality(*blocks)
        definition = translation.defs.get(node.symbol)
        if definition is None:
            raise TranslationError(f'no defining formula for {node.symbol}')
        return translation.instantiate(definition, blocks)
    if isinstance(node, syntax.Not):
        return syntax.Not(_translate(translation, node.body))
    if isinstance(node, syntax.BINARY_CONNECTIVES):
        return type(node)(_translate(translation, node.left), _translate(translation, node.right))
    if isinstance(node, syntax.QUANTIFIERS):
        return _quantify(translation, node, _translate(translation, node.body))
    if isinstance(node, syntax.BOUNDED_QUANTIFIERS):
        return _bounded(translation, node, _translate(translation, node.body))
    raise TranslationError(f'cannot translate {type(node).__name__}')


def _quantify(translation, node, body):
    universal = isinstance(node, syntax.Forall)
    if translation.domain_bound is not None:
        param, strict = translation.domain_bound
        kind = syntax.BForall if universal else syntax.BExists
        return kind(node.var, param, strict, body)
    block = translation.block(node.var)
    if not isinstance(translation.domain, syntax.Top):
        guard = translation.guard(node.var)
        body = syntax.Implies(guard, body) if universal else syntax.And(guard, body)
    return (syntax.forall_block if universal else syntax.exists_block)(block, body)


def _bounded(translation, node, body):
    universal = isinstance(node, syntax.BForall)
    if not isinstance(translation.domain, syntax.Top):
        guard = translation.guard(node.var)
        body = syntax.Implies(guard, body) if universal else syntax.And(guard, body)
    if translation.order_preserving:
        return type(node)(node.var, node.bound, node.strict, body)
    var_block, bound_block = translation.block(node.var), translation.block(node.bound)
    order = translation.instantiate(translation.defs['<'], (var_block, bound_block))
    if not node.strict:
        order = syntax.Or(order, translation.equality(var_block, bound_block))
    body = syntax.Implies(order, body) if universal else syntax.And(order, body)
    return (syntax.forall_block if universal else syntax.exists_block)(var_block, body)


def relativize_to_class(formula, anchor):
    """Relativise the unbounded quantifiers of ``formula`` to the class of ``anchor``."""
    formula = syntax.rename_bound(formula, {anchor})

    def guard(var):
        return syntax.disjunction([
            syntax.Atom('<', (anchor, var)), syntax.Atom('<', (var, anchor)), syntax.Atom('=', (var, anchor)),
        ])

    def walk(node):
        if isinstance(node, (syntax.Atom, syntax.Bot, syntax.Top)):
            return node
        if isinstance(node, syntax.Not):
            return syntax.Not(walk(node.body))
        if isinstance(node, syntax.BINARY_CONNECTIVES):
            return type(node)(walk(node.left), walk(node.right))
        body = walk(node.body)
        if isinstance(node, syntax.Forall):
            return syntax.Forall(node.var, syntax.Implies(guard(node.var), body))
        if isinstance(node, syntax.Exists):
            return syntax.Exists(node.var, syntax.And(guard(node.var), body))
        return syntax.rebuild(node, body=body)
    return walk(formula)


# Combining translations

def _identity_like(translation):
    return translation.dimension == 1 and isinstance(translation.domain, syntax.Top)


def compose(first, second):
    """
    The translation applying ``first`` then ``second``:
    ``apply(compose(first, second), phi) == apply(second, apply(first, phi))`` up to variable names.

    Raises:
        TranslationError: when ``first``'s target is not covered by ``second``'s source
    """
    available = {symbol for symbol, _ in second.source_relations}
    missing = {symbol for symbol, _ in first.target.relational().relations} - available
    if missing:
        raise TranslationError(f'{second.name or "second translation"} does not define {sorted(missing)}')
    if set(first.params) & set(second.params):
        raise TranslationError('composed translations need distinct parameter names')
    dimension = first.dimension * second.dimension
    renaming = {}
    for index in range(2 + max((arity for _, arity in first.source_relations), default=0)):
        for j, name in enumerate(first.formals(index)):
            for k, inner in enumerate(second.block(name)):
                renaming[inner] = formal(index, j * second.dimension + k, dimension)

    def lift(formula):
        return syntax.substitute(apply(second, formula), renaming)

    domain_parts = [second.instantiate(second.domain, (second.block(name),)) for name in first.formals(0)]
    domain = syntax.smart_and(
        lift(first.domain), syntax.substitute(syntax.smart_conjunction(domain_parts), renaming),
    )
    defs = {symbol: lift(definition) for symbol, definition in first.defs.items()}
    identity_blocks = syntax.conjunction(
        syntax.Atom('=', (a, b)) for a, b in zip(
            tuple(formal(0, j, dimension) for j in range(dimension)),
            tuple(formal(1, j, dimension) for j in range(dimension)),
        )
    )
    congruence = lift(first.equality(first.formals(0), first.formals(1)))
    if congruence == identity_blocks:
        congruence = None
    params = tuple(itertools.chain.from_iterable(second.block(param) for param in first.params)) + second.params
    if _identity_like(first):
        domain_bound = second.domain_bound
    elif _identity_like(second):
        domain_bound = first.domain_bound
    else:
        domain_bound = None
    return Translation(
        first.source, second.target, dimension, params, domain, defs, congruence, domain_bound,
        name=f'{second.name} o {first.name}',
    )


def disjunctive(first, condition, second):
    """
    Follow ``first`` where ``condition`` holds and ``second`` elsewhere.

    The domain is ``(condition & domain_first) | (~condition & domain_second)``.

    Raises:
        TranslationError: when dimensions, sources or targets differ
    """
    if first.dimension != second.dimension:
        raise TranslationError(f'dimensions differ: {first.dimension} and {second.dimension}')
    if first.source.relational() != second.source.relational():
        raise TranslationError('disjunctive translations need a common source signature')
    formals = set(itertools.chain.from_iterable(first.formals(i) for i in range(4)))
    if condition.free_variables & formals:
        raise TranslationError(f'condition uses formal variables {sorted(condition.free_variables & formals)}')
    params = tuple(dict.fromkeys(first.params + second.params + tuple(sorted(condition.free_variables))))

    def case(left, right):
        return syntax.Or(syntax.And(condition, left), syntax.And(syntax.Not(condition), right))

    defs = {symbol: case(first.defs[symbol], second.defs[symbol]) for symbol in first.defs}
    if first.congruence is None and second.congruence is None:
        congruence = None
    else:
        congruence = case(
            first.equality(first.formals(0), first.formals(1)), second.equality(second.formals(0), second.formals(1)),
        )
    return Translation(
        first.source, first.target.union(second.target), first.dimension, params,
        case(first.domain, second.domain), defs, congruence,
        name=f'({first.name} if {syntax.to_text(condition)} else {second.name})',
    )


def translation_from_json(data):
    """
    Build a translation from its JSON object.

    Keys: ``dimension``, ``params``, ``domain``, ``defs`` (symbol to formula text),
    ``congruence`` (formula text or null), optional ``source`` and ``target`` signature names.
    """
    try:
        source = SIGNATURES[data.get('source', 'relational-arithmetic')]
        target = SIGNATURES[data.get('target', 'relational-arithmetic')]
    except KeyError as e:
        raise TranslationError(f'unknown signature {e.args[0]!r}') from None
    congruence = data.get('congruence')
    return Translation(
        source, target,
        dimension=int(data.get('dimension', 1)),
        params=tuple(data.get('params', ())),
        domain=parsing.parse(data['domain']) if data.get('domain') else syntax.TOP,
        defs={symbol: parsing.parse(text) for symbol, text in data.get('defs', {}).items()},
        congruence=parsing.parse(congruence) if congruence else None,
        name=data.get('name', 'translation'),
    )


def load_translation(path):
    with open(path, encoding='utf-8') as handle:
        return translation_from_json(json.load(handle))


# Internal models

def internal_model(structure, translation, params=()):
    """
    The structure that ``translation`` defines inside ``structure`` for the parameter values ``params``.

    The identity axioms are checked exhaustively: the congruence must be an
    equivalence relation compatible with every defining formula, and function
    graphs must be total and single valued modulo the congruence.

    Raises:
        TranslationError: on an empty domain or a violated identity axiom
    """
    params = tuple(params)
    if len(params) != len(translation.params):
        raise TranslationError(f'expected {len(translation.params)} parameter values, got {len(params)}')
    evaluator = models.Evaluator(structure)
    base = dict(zip(translation.params, params))

    def holds(formula, values):
        assignment = dict(base)
        for index, value in enumerate(values):
            assignment.update(zip(translation.formals(index), value))
        return evaluator.satisfies(formula, assignment)

    domain = [
        value for value in itertools.product(structure.elements, repeat=translation.dimension)
        if holds(translation.domain, (value,))
    ]
    if not domain:
        raise TranslationError(f'the domain of {translation.name or "the translation"} is empty')
    logger.debug('internal model domain has %d tuples', len(domain))

    if translation.congruence is None:
        classes = [[value] for value in domain]
    else:
        classes = _congruence_classes(translation, domain, holds)
    representatives = [members[0] for members in classes]
    if translation.congruence is not None:
        _check_compatibility(translation, representatives, classes, holds)

    relations, graphs, constants = {}, {}, {}
    functions = dict(translation.source.functions)
    for symbol, arity in translation.source_relations:
        definition = translation.defs[symbol]
        if symbol in translation.source.constants or symbol in functions:
            graph = {}
            for inputs in itertools.product(range(len(classes)), repeat=arity - 1):
                values = [representatives[i] for i in inputs]
                outputs = [j for j, rep in enumerate(representatives) if holds(definition, values + [rep])]
                if not outputs:
                    raise TranslationError(f'totality of {symbol} fails at {inputs}')
                if len(outputs) > 1:
                    raise TranslationError(f'uniqueness of {symbol} fails at {inputs}')
                graph[inputs] = outputs[0]
            if symbol in translation.source.constants:
                constants[symbol] = graph[()]
            else:
                graphs[symbol] = graph
        else:
            relations[symbol] = frozenset(
                inputs for inputs in itertools.product(range(len(classes)), repeat=arity)
                if holds(definition, [representatives[i] for i in inputs])
            )
    return models.FiniteStructure(
        len(classes), translation.source, relations, graphs, constants,
        name=f'{translation.name or "translation"} in {structure.name or "structure"}',
    )


def _congruence_classes(translation, domain, holds):
    def same(a, b):
        return holds(translation.congruence, (a, b))

    for a in domain:
        if not same(a, a):
            raise CongruenceError(f'reflexivity of the congruence fails at {a}')
    for a, b in itertools.product(domain, repeat=2):
        if same(a, b) and not same(b, a):
            raise CongruenceError(f'symmetry of the congruence fails at {a}, {b}')
    classes = []
    for value in domain:
        for members in classes:
            if same(members[0], value):
                members.append(value)
                break
        else:
            classes.append([value])
    for members in classes:
        for a, b in itertools.product(members, repeat=2):
            if not same(a, b):
                raise CongruenceError(f'transitivity of the congruence fails at {a}, {b}')
    for first, second in itertools.combinations(classes, 2):
        if same(first[0], second[0]):
            raise CongruenceError(f'transitivity of the congruence fails at {first[0]}, {second[0]}')
    return classes


def _check_compatibility(translation, representatives, classes, holds):
    for symbol, arity in translation.source_relations:
        definition = translation.defs[symbol]
        for inputs in itertools.product(range(len(classes)), repeat=arity):
            values = [representatives[i] for i in inputs]
            expected = holds(definition, values)
            for position, index in enumerate(inputs):
                for other in classes[index][1:]:
                    changed = values[:position] + [other] + values[position + 1:]
                    if holds(definition, changed) != expected:
                        raise CongruenceError(f'congruence for {symbol} fails at argument {position}')


# The theory of a witness

@functools.lru_cache(maxsize=None)
def tn_at(param):
    """``param |= TN``: the TN axioms translated by tr(``param``)."""
    return apply(cutoff_translation(param), syntax.conjunction(theories.tn_axioms()))


def _require_one_sigma1(sigma, closed=True):
    certificate = syntax.certify(sigma)
    if certificate.kind != syntax.Purity.ONE_SIGMA1:
        raise syntax.PurityError(f'expected a pure 1-Sigma1 sentence, got {certificate.kind.value}')
    if closed and sigma.free_variables:
        raise syntax.PurityError(f'expected a sentence, {sorted(sigma.free_variables)} are free')
    return certificate


def sigma_q(sigma, variant='plain', parameter=None):
    """
    The theory of a TN-number above a witness of ``sigma``.

    Args:
        sigma (Formula): a pure 1-Sigma1 sentence ``E x. delta``
        variant (str): ``plain``, ``param`` (zero read as ``parameter``, default ``x``)
            or ``star`` (the witness is the least one and its successor is the maximum)
        parameter (str): makes the result a formula in ``parameter``, see ``zero_parameter_translation``

    Raises:
        PurityError: when ``sigma`` is not a pure 1-Sigma1 sentence
    """
    if variant not in ('plain', 'param', 'star'):
        raise ValueError(f'unknown sigma^q variant {variant!r}')
    _require_one_sigma1(sigma)
    witness, matrix = sigma.var, sigma.body
    top = syntax.fresh_variable('z', sigma.variables)
    if variant == 'star':
        smaller = syntax.fresh_variable('y', sigma.variables | {top})
        earlier = syntax.substitute(matrix, {witness: smaller})
        body = syntax.conjunction([
            syntax.Atom('S', (witness, top)),
            matrix,
            syntax.BForall(smaller, witness, True, syntax.Not(earlier)),
            tn_at(top),
        ])
        result = syntax.Exists(top, syntax.BExists(witness, top, True, body))
    else:
        result = syntax.Exists(top, syntax.And(syntax.BExists(witness, top, True, matrix), tn_at(top)))
    if variant == 'param' and parameter is None:
        parameter = 'x'
    if parameter is not None:
        result = apply(zero_parameter_translation(parameter), result)
    return result


# Witness comparison

def witness_compare(alpha, beta, strict=True, closed=True):
    """
    ``alpha < beta`` (strict) or ``alpha <= beta``: alpha has a witness and beta none up to it.
    Open sides are accepted when ``closed`` is false.

    Raises:
        PurityError: when either side is not pure 1-Sigma1
    """
    _require_one_sigma1(alpha, closed)
    _require_one_sigma1(beta, closed)
    outer = alpha.var
    inner = syntax.fresh_variable(beta.var, alpha.variables) if beta.var in alpha.variables else beta.var
    beta_matrix = syntax.substitute(beta.body, {beta.var: inner})
    none_before = syntax.BForall(inner, outer, not strict, syntax.Not(beta_matrix))
    return syntax.Exists(outer, syntax.And(alpha.body, none_before))


def split_comparison(gamma, closed=True):
    """Return ``(alpha, beta, strict)`` when ``gamma`` is a witness comparison, None otherwise.

    Open sides are accepted when ``closed`` is false.
    """
    if not isinstance(gamma, syntax.Exists) or not isinstance(gamma.body, syntax.And):
        return None
    alpha_matrix, rest = gamma.body.left, gamma.body.right
    if not isinstance(rest, syntax.BForall) or rest.bound != gamma.var or not isinstance(rest.body, syntax.Not):
        return None
    alpha = syntax.Exists(gamma.var, alpha_matrix)
    beta = syntax.Exists(rest.var, rest.body.body)
    if closed and (alpha.free_variables or beta.free_variables):
        return None
    return alpha, beta, not rest.strict


def ortho(gamma):
    """``(alpha < beta)`` becomes ``(beta <= alpha)`` and ``(alpha <= beta)`` becomes ``(beta < alpha)``."""
    parts = split_comparison(gamma)
    if parts is None:
        raise ValueError(f'not a witness comparison: {syntax.to_text(gamma)[:120]}')
    alpha, beta, strict = parts
    return witness_compare(beta, alpha, strict=not strict)


# Sigma1 friendliness maps

def friendly_map_r(sigma):
    return sigma_q(sigma)


def friendly_map_scat(sigma):
    parameter = syntax.fresh_variable('x', sigma.variables)
    return syntax.Exists(parameter, sigma_q(sigma, parameter=parameter))


# Desk scale consequence

class DeskSearch(NamedTuple):
    """Outcome of a bounded search for a model of a premise that refutes a conclusion."""
    counterexample: Optional[models.FiniteStructure]
    examined: int
    exhausted: bool

    @property
    def verdict(self):
        if self.counterexample is not None:
            return False
        return True if self.exhausted else None


def witness_part(premise):
    """Return ``(z, W)`` when ``premise`` is ``E z. (W & z |= TN)``, None otherwise."""
    if not isinstance(premise, syntax.Exists) or not isinstance(premise.body, syntax.And):
        return None
    if premise.body.right != tn_at(premise.var):
        return None
    return premise.var, premise.body.left


def search_counterexample(premise, conclusion, max_size, budget=None):
    """
    Look for a model of size at most ``max_size`` where ``premise`` holds and ``conclusion`` fails.

    A premise of the shape of sigma^q is searched over all its models up to
    isomorphism, standard or not (``models.ExtensionSearch``); any other
    premise over every arithmetic structure (``models.enumerate_models``).
    Structures found are checked against both sentences before they are returned.
    """
    refuted = syntax.And(premise, syntax.Not(conclusion))
    split = witness_part(premise)
    examined = 0
    try:
        if split is not None:
            cut, part = split
            search = models.ExtensionSearch(max_size, budget)
            try:
                for structure in search.models(syntax.And(part, syntax.Not(conclusion)), cut):
                    if models.satisfies(structure, refuted):
                        return DeskSearch(structure, search.examined, True)
                    logger.warning('%s does not refute the conclusion after completion', structure.name)
            finally:
                examined = search.examined
        else:
            for structure in models.enumerate_models(syntax.ARITHMETIC, max_size, premise, budget=budget):
                examined += 1
                if not models.satisfies(structure, conclusion):
                    return DeskSearch(structure, examined, True)
    except models.BudgetExceededError as e:
        logger.debug('desk search gave up: %s', e)
        return DeskSearch(None, examined, False)
    return DeskSearch(None, examined, True)


def entails(premise, conclusion, max_size, budget=None):
    """
    True when every model of ``premise`` of size at most ``max_size`` satisfies ``conclusion``,
    False on a counterexample and None when the search budget runs out.
    """
    return search_counterexample(premise, conclusion, max_size, budget).verdict


def counterexample(premise, conclusion, max_size, budget=None):
    """
    Raises:
        BudgetExceededError: when the budget runs out before a counterexample is found
    """
    search = search_counterexample(premise, conclusion, max_size, budget)
    if search.verdict is None:
        raise models.BudgetExceededError(f'no counterexample among {search.examined} structures, search unfinished')
    return search.counterexample


def consistent(premise, max_size, budget=None):
    """Whether ``premise`` has a model of size at most ``max_size``, None when the budget runs out."""
    verdict = entails(premise, syntax.BOT, max_size, budget)
    return None if verdict is None else not verdict
