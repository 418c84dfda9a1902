import dataclasses
import enum
import functools
import itertools
import logging
from typing import NamedTuple, Tuple, Union


logger = logging.getLogger(__name__)

ARITHMETIC_FUNCTIONS = ('Z', 'S', 'A', 'M')
GRAPH_ARITIES = {'Z': 1, 'S': 2, 'A': 3, 'M': 3}
# graphs of substitution and negation on codes, Delta0 definable and read as pure atoms
CODED_ARITIES = {'Sub': 3, 'Neg': 2}
NUMERAL_CHAIN_LIMIT = 8


class SignatureError(ValueError):
    """Raised for unknown symbols and arity mismatches."""


class PurityError(ValueError):
    """Raised when a formula falls outside the pure bounded grammars."""


# Terms

@dataclasses.dataclass(frozen=True)
class App:
    """A function symbol applied to terms. Variables are plain strings."""
    symbol: str
    args: Tuple = ()

    @functools.cached_property
    def variables(self):
        return frozenset().union(*(term_variables(arg) for arg in self.args))


Term = Union[str, App]
ZERO = App('Z')


def term_variables(term):
    if isinstance(term, str):
        return frozenset([term])
    return term.variables


def is_variable(term):
    return isinstance(term, str)


def num(n):
    """Return the numeral of ``n``: ``S`` applied ``n`` times to ``0``."""
    if n < 0:
        raise ValueError(f'numerals are defined for natural numbers, got {n}')
    term = ZERO
    for _ in range(n):
        term = App('S', (term,))
    return term


def substitute_term(term, mapping):
    if isinstance(term, str):
        return mapping.get(term, term)
    if not term.args:
        return term
    return App(term.symbol, tuple(substitute_term(arg, mapping) for arg in term.args))


# Formulas

class Formula:
    """Base class of the immutable formula nodes."""

    @functools.cached_property
    def free_variables(self):
        return frozenset(self._free_variables())

    @functools.cached_property
    def variables(self):
        """Every variable name occurring in the formula, free or bound."""
        return frozenset(self._variables())

    def _free_variables(self):
        return ()

    def _variables(self):
        return ()

    def __str__(self):
        return to_text(self)


@dataclasses.dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclasses.dataclass(frozen=True)
class Top(Formula):
    pass


BOT = Bot()
TOP = Top()


@dataclasses.dataclass(frozen=True)
class Atom(Formula):
    """A relation symbol applied to terms.

    ``=`` and ``<`` are the equality and order atoms. The arithmetical graph
    atoms ``Z``, ``S``, ``A`` and ``M`` carry the output as their last argument.
    """
    symbol: str
    args: Tuple = ()

    def _free_variables(self):
        return itertools.chain.from_iterable(term_variables(arg) for arg in self.args)

    def _variables(self):
        return self._free_variables()


@dataclasses.dataclass(frozen=True)
class Not(Formula):
    body: Formula

    def _free_variables(self):
        return self.body.free_variables

    def _variables(self):
        return self.body.variables


@dataclasses.dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    def _free_variables(self):
        return self.left.free_variables | self.right.free_variables

    def _variables(self):
        return self.left.variables | self.right.variables


@dataclasses.dataclass(frozen=True)
class And(_Binary):
    pass


@dataclasses.dataclass(frozen=True)
class Or(_Binary):
    pass


@dataclasses.dataclass(frozen=True)
class Implies(_Binary):
    pass


@dataclasses.dataclass(frozen=True)
class _Quantifier(Formula):
    var: str
    body: Formula

    def _free_variables(self):
        return self.body.free_variables - {self.var}

    def _variables(self):
        return self.body.variables | {self.var}


@dataclasses.dataclass(frozen=True)
class Forall(_Quantifier):
    pass


@dataclasses.dataclass(frozen=True)
class Exists(_Quantifier):
    pass


@dataclasses.dataclass(frozen=True)
class _BoundedQuantifier(Formula):
    """``var < bound`` (strict) or ``var <= bound`` restricted quantifier."""
    var: str
    bound: str
    strict: bool
    body: Formula

    def __post_init__(self):
        if self.var == self.bound:
            raise ValueError(f'bounded quantifier variable {self.var} cannot be its own bound')

    def _free_variables(self):
        return (self.body.free_variables - {self.var}) | {self.bound}

    def _variables(self):
        return self.body.variables | {self.var, self.bound}


@dataclasses.dataclass(frozen=True)
class BForall(_BoundedQuantifier):
    pass


@dataclasses.dataclass(frozen=True)
class BExists(_BoundedQuantifier):
    pass


QUANTIFIERS = (Forall, Exists)
BOUNDED_QUANTIFIERS = (BForall, BExists)
BINARY_CONNECTIVES = (And, Or, Implies)


def iff(left, right):
    return And(Implies(left, right), Implies(right, left))


def equals(left, right):
    """Equality atom, with ``0 = u`` kept as the zero graph atom."""
    if left == ZERO and is_variable(right):
        return Atom('Z', (right,))
    return Atom('=', (left, right))


def less(left, right):
    return Atom('<', (left, right))


def less_equal(left, right):
    return Or(Atom('<', (left, right)), Atom('=', (left, right)))


def conjunction(formulas):
    """Right nested conjunction, ``top`` when empty."""
    formulas = list(formulas)
    if not formulas:
        return TOP
    result = formulas[-1]
    for formula in reversed(formulas[:-1]):
        result = And(formula, result)
    return result


def disjunction(formulas):
    """Right nested disjunction, ``bot`` when empty."""
    formulas = list(formulas)
    if not formulas:
        return BOT
    result = formulas[-1]
    for formula in reversed(formulas[:-1]):
        result = Or(formula, result)
    return result


def smart_and(left, right):
    if isinstance(left, Bot) or isinstance(right, Bot):
        return BOT
    if isinstance(left, Top):
        return right
    if isinstance(right, Top):
        return left
    if left == right:
        return left
    return And(left, right)


def smart_or(left, right):
    if isinstance(left, Top) or isinstance(right, Top):
        return TOP
    if isinstance(left, Bot):
        return right
    if isinstance(right, Bot):
        return left
    if left == right:
        return left
    return Or(left, right)


def smart_not(body):
    if isinstance(body, Top):
        return BOT
    if isinstance(body, Bot):
        return TOP
    if isinstance(body, Not):
        return body.body
    return Not(body)


def smart_conjunction(formulas):
    return functools.reduce(smart_and, formulas, TOP)


def smart_disjunction(formulas):
    return functools.reduce(smart_or, formulas, BOT)


def exists_block(variables, body):
    for var in reversed(list(variables)):
        body = Exists(var, body)
    return body


def forall_block(variables, body):
    for var in reversed(list(variables)):
        body = Forall(var, body)
    return body


def universal_closure(formula, order=None):
    """Universally close ``formula``, binding the free variables in ``order`` (sorted by default)."""
    free = formula.free_variables
    order = [var for var in (order or sorted(free)) if var in free]
    order += sorted(free - set(order))
    return forall_block(order, formula)


def iter_nodes(formula):
    """Iterate over every sub-formula, root first."""
    stack = [formula]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Not):
            stack.append(node.body)
        elif isinstance(node, BINARY_CONNECTIVES):
            stack.extend((node.right, node.left))
        elif isinstance(node, QUANTIFIERS + BOUNDED_QUANTIFIERS):
            stack.append(node.body)


def size(formula):
    return sum(1 for _ in iter_nodes(formula))


def is_sentence(formula):
    return not formula.free_variables


def fresh_variable(stem, avoid):
    """Return ``stem`` or ``stem<i>`` for the first ``i`` not in ``avoid``."""
    if stem not in avoid:
        return stem
    for i in itertools.count(1):
        candidate = f'{stem}{i}'
        if candidate not in avoid:
            return candidate
    raise AssertionError('unreachable')


class FreshNames:
    """Hand out variable names avoiding a growing set of used names."""

    def __init__(self, avoid=()):
        self.used = set(avoid)
        self.history = []

    def __call__(self, stem):
        name = fresh_variable(stem, self.used)
        self.used.add(name)
        self.history.append(name)
        return name

    def avoid(self, names):
        self.used.update(names)


# Structural rewriting

def rebuild(node, body=None, left=None, right=None):
    """Copy a node replacing its children."""
    if isinstance(node, Not):
        return Not(body)
    if isinstance(node, BINARY_CONNECTIVES):
        return type(node)(left, right)
    if isinstance(node, QUANTIFIERS):
        return type(node)(node.var, body)
    if isinstance(node, BOUNDED_QUANTIFIERS):
        return type(node)(node.var, node.bound, node.strict, body)
    raise ValueError(f'cannot rebuild {type(node).__name__}')


def replace_atoms(formula, function):
    """Replace each atom by ``function(atom)``; the caller handles variable capture."""
    if isinstance(formula, Atom):
        return function(formula)
    if isinstance(formula, (Bot, Top)):
        return formula
    if isinstance(formula, Not):
        return Not(replace_atoms(formula.body, function))
    if isinstance(formula, BINARY_CONNECTIVES):
        return type(formula)(replace_atoms(formula.left, function), replace_atoms(formula.right, function))
    if isinstance(formula, (QUANTIFIERS + BOUNDED_QUANTIFIERS)):
        return rebuild(formula, body=replace_atoms(formula.body, function))
    # opaque leaves defined by other modules
    return formula


def rename_symbols(formula, mapping):
    """Rename relation, function and constant symbols following ``mapping``."""
    def rename_term(term):
        if isinstance(term, str):
            return term
        return App(mapping.get(term.symbol, term.symbol), tuple(rename_term(arg) for arg in term.args))

    def rename_atom(atom):
        return Atom(mapping.get(atom.symbol, atom.symbol), tuple(rename_term(arg) for arg in atom.args))
    return replace_atoms(formula, rename_atom)


def substitute(formula, mapping):
    """
    Simultaneously replace free variables by terms, renaming bound variables
    to avoid capture.

    Args:
        formula (Formula): the formula to rewrite
        mapping (dict): variable name to term

    Returns:
        Formula: the substituted formula

    Note:
        A bounded quantifier whose bound is replaced by a compound term becomes
        an unbounded quantifier guarded by the corresponding order atom.
    """
    mapping = {var: term for var, term in mapping.items() if var in formula.free_variables and term != var}
    if not mapping:
        return formula
    return _substitute(formula, mapping)


def _substitute(formula, mapping):
    if not mapping or not (formula.free_variables & mapping.keys()):
        return formula
    if isinstance(formula, Atom):
        return Atom(formula.symbol, tuple(substitute_term(arg, mapping) for arg in formula.args))
    if isinstance(formula, Not):
        return Not(_substitute(formula.body, mapping))
    if isinstance(formula, BINARY_CONNECTIVES):
        return type(formula)(_substitute(formula.left, mapping), _substitute(formula.right, mapping))
    if isinstance(formula, QUANTIFIERS + BOUNDED_QUANTIFIERS):
        inner = {var: term for var, term in mapping.items() if var != formula.var}
        var, body = formula.var, formula.body
        incoming = frozenset().union(
            *(term_variables(term) for name, term in inner.items() if name in body.free_variables)
        )
        if isinstance(formula, BOUNDED_QUANTIFIERS):
            incoming |= term_variables(substitute_term(formula.bound, mapping))
        if var in incoming:
            new_var = fresh_variable(var, body.variables | incoming | inner.keys() | formula.variables)
            body = _substitute(body, {var: new_var})
            var = new_var
        body = _substitute(body, inner)
        if isinstance(formula, QUANTIFIERS):
            return type(formula)(var, body)
        bound = substitute_term(formula.bound, mapping)
        if is_variable(bound):
            return type(formula)(var, bound, formula.strict, body)
        guard = Atom('<', (var, bound)) if formula.strict else Or(Atom('<', (var, bound)), Atom('=', (var, bound)))
        if isinstance(formula, BForall):
            return Forall(var, Implies(guard, body))
        return Exists(var, And(guard, body))
    return formula


def rename_bound(formula, avoid):
    """Rename bound variables that occur in ``avoid`` to fresh names."""
    avoid = set(avoid)
    names = FreshNames(avoid | formula.variables)

    def walk(node):
        if isinstance(node, (Atom, Bot, Top)):
            return node
        if isinstance(node, Not):
            return Not(walk(node.body))
        if isinstance(node, BINARY_CONNECTIVES):
            return type(node)(walk(node.left), walk(node.right))
        if isinstance(node, QUANTIFIERS + BOUNDED_QUANTIFIERS):
            body, var = node.body, node.var
            if var in avoid:
                new_var = names(var)
                body = substitute(body, {var: new_var})
                var = new_var
            body = walk(body)
            if isinstance(node, QUANTIFIERS):
                return type(node)(var, body)
            return type(node)(var, node.bound, node.strict, body)
        return node
    return walk(formula)


def negation_normal_form(formula):
    """Push negations onto atoms, eliminating implications."""
    return _nnf(formula, positive=True)


def _nnf(formula, positive):
    if isinstance(formula, Bot):
        return BOT if positive else TOP
    if isinstance(formula, Top):
        return TOP if positive else BOT
    if isinstance(formula, Atom):
        return formula if positive else Not(formula)
    if isinstance(formula, Not):
        return _nnf(formula.body, not positive)
    if isinstance(formula, Implies):
        left, right = _nnf(formula.left, not positive), _nnf(formula.right, positive)
        return Or(left, right) if positive else And(left, right)
    if isinstance(formula, (And, Or)):
        left, right = _nnf(formula.left, positive), _nnf(formula.right, positive)
        if isinstance(formula, And) == positive:
            return And(left, right)
        return Or(left, right)
    body = _nnf(formula.body, positive)
    if isinstance(formula, QUANTIFIERS):
        kind = type(formula) if positive else (Exists if isinstance(formula, Forall) else Forall)
        return kind(formula.var, body)
    if isinstance(formula, BOUNDED_QUANTIFIERS):
        kind = type(formula) if positive else (BExists if isinstance(formula, BForall) else BForall)
        return kind(formula.var, formula.bound, formula.strict, body)
    raise ValueError(f'cannot normalise {type(formula).__name__}')


# Relational form

def _lower_term(term, names, graphs):
    """Return a variable standing for ``term``, appending its defining graph atoms."""
    if is_variable(term):
        return term
    target = names('w')
    _lower_into(term, target, names, graphs)
    return target


def _lower_into(term, target, names, graphs):
    if is_variable(term):
        graphs.append(Atom('=', (term, target)))
        return
    inputs = tuple(_lower_term(arg, names, graphs) for arg in term.args)
    graphs.append(Atom(term.symbol, inputs + (target,)))


def lower_atom(atom, names):
    """
        Split an atom with compound terms into defining graph atoms and a core atom.

        args:
            atom (Atom): the atom to lower
            names (FreshNames): the fresh name supply
        returns:
            (witnesses, graphs, core): the fresh variables in creation order, their graph
            atoms, and the core atom (None when the graph atoms express an equation alone)
    """
    start = len(names.history)
    graphs = []
    args = atom.args
    if atom.symbol == '=' and len(args) == 2 and any(not is_variable(arg) for arg in args):
        left, right = args
        if is_variable(left):
            left, right = right, left
        if is_variable(right):
            _lower_into(left, right, names, graphs)
        else:
            target = _lower_term(left, names, graphs)
            _lower_into(right, target, names, graphs)
        core = None
    else:
        core = Atom(atom.symbol, tuple(_lower_term(arg, names, graphs) for arg in args))
    return tuple(names.history[start:]), graphs, core


def relationalize(formula):
    """Rewrite function terms into graph atoms by existential unnesting."""
    names = FreshNames(formula.variables)

    def walk(node):
        if isinstance(node, Atom):
            if all(is_variable(arg) for arg in node.args):
                return node
            witnesses, graphs, core = lower_atom(node, names)
            return exists_block(witnesses, conjunction(graphs + ([core] if core is not None else [])))
        if isinstance(node, (Bot, Top)):
            return node
        if isinstance(node, Not):
            return Not(walk(node.body))
        if isinstance(node, BINARY_CONNECTIVES):
            return type(node)(walk(node.left), walk(node.right))
        return rebuild(node, body=walk(node.body))
    return walk(formula)


# Signatures

@dataclasses.dataclass(frozen=True)
class Signature:
    """
    A finite first-order signature.

    Args:
        relations (tuple): pairs (name, arity)
        functions (tuple): pairs (name, arity), arity at least 1
        constants (tuple): constant names
        arithmetical (bool): marks the arithmetical signature and its relational variant
    """
    relations: Tuple[Tuple[str, int], ...] = ()
    functions: Tuple[Tuple[str, int], ...] = ()
    constants: Tuple[str, ...] = ()
    arithmetical: bool = False

    def __post_init__(self):
        names = [name for name, _ in self.relations] + [name for name, _ in self.functions] + list(self.constants)
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise SignatureError(f'duplicate symbols in signature: {", ".join(duplicates)}')
        for name, arity in self.relations + self.functions:
            if arity < 0:
                raise SignatureError(f'negative arity for {name}')

    @property
    def symbols(self):
        return tuple(name for name, _ in self.relations + self.functions) + self.constants

    @property
    def is_relational(self):
        return not self.functions and not self.constants

    def relation_arity(self, symbol):
        """Arity of ``symbol`` read as a relation, functions through their graphs."""
        if symbol == '=':
            return 2
        for name, arity in self.relations:
            if name == symbol:
                return arity
        for name, arity in self.functions:
            if name == symbol:
                return arity + 1
        if symbol in self.constants:
            return 1
        raise SignatureError(f'unknown relation symbol {symbol}')

    def function_arity(self, symbol):
        for name, arity in self.functions:
            if name == symbol:
                return arity
        if symbol in self.constants:
            return 0
        raise SignatureError(f'unknown function symbol {symbol}')

    def relational(self):
        """The relational variant: constants and functions become graph relations."""
        relations = tuple((name, 1) for name in self.constants)
        relations += tuple((name, arity + 1) for name, arity in self.functions)
        return Signature(relations=relations + self.relations, arithmetical=self.arithmetical)

    def renamed(self, mapping):
        return Signature(
            relations=tuple((mapping.get(name, name), arity) for name, arity in self.relations),
            functions=tuple((mapping.get(name, name), arity) for name, arity in self.functions),
            constants=tuple(mapping.get(name, name) for name in self.constants),
        )

    def union(self, other):
        relations = self.relations + tuple(item for item in other.relations if item not in self.relations)
        functions = self.functions + tuple(item for item in other.functions if item not in self.functions)
        constants = self.constants + tuple(name for name in other.constants if name not in self.constants)
        return Signature(relations=relations, functions=functions, constants=constants)


ARITHMETIC = Signature(
    relations=(('<', 2),), functions=(('S', 1), ('A', 2), ('M', 2)), constants=('Z',), arithmetical=True,
)
RELATIONAL_ARITHMETIC = ARITHMETIC.relational()
CODED_ARITHMETIC = Signature(
    relations=RELATIONAL_ARITHMETIC.relations + tuple(CODED_ARITIES.items()), arithmetical=True,
)
SCATTERED = Signature(relations=(('S', 2), ('A', 3), ('M', 3), ('<', 2)))
JAN = Signature(relations=(('E', 2),))
SUCCESSOR = Signature(functions=(('S', 1),), constants=('Z',))


def check_signature(formula, signature):
    """Raise ``SignatureError`` when ``formula`` uses a symbol outside ``signature``."""
    for node in iter_nodes(formula):
        if not isinstance(node, Atom):
            continue
        arity = signature.relation_arity(node.symbol)
        if arity != len(node.args):
            raise SignatureError(f'{node.symbol} expects {arity} arguments, got {len(node.args)}')
        for arg in node.args:
            _check_term(arg, signature)


def _check_term(term, signature):
    if is_variable(term):
        return
    arity = signature.function_arity(term.symbol)
    if arity != len(term.args):
        raise SignatureError(f'{term.symbol} expects {arity} arguments, got {len(term.args)}')
    for arg in term.args:
        _check_term(arg, signature)


# Pure bounded grammars

class Purity(enum.Enum):
    DELTA0 = 'pure-delta0'
    ONE_SIGMA1 = 'pure-1-sigma1'
    SIGMA1 = 'pure-sigma1'


@dataclasses.dataclass(frozen=True)
class PurityCertificate:
    kind: Purity
    prefix: Tuple[str, ...]
    matrix: Formula


class Purified(NamedTuple):
    formula: Formula
    certificate: PurityCertificate


_PURE_ATOM_ARITIES = {'<': 2, '=': 2, **GRAPH_ARITIES, **CODED_ARITIES}


def is_pure_delta0(formula):
    """Decide membership in the pure bounded grammar."""
    for node in iter_nodes(formula):
        if isinstance(node, Atom):
            if _PURE_ATOM_ARITIES.get(node.symbol) != len(node.args):
                return False
            if not all(is_variable(arg) for arg in node.args):
                return False
        elif not isinstance(node, (Bot, Top, Not) + BINARY_CONNECTIVES + BOUNDED_QUANTIFIERS):
            return False
    return True


def certify(formula):
    """
    Certify a formula as pure Delta0, pure 1-Sigma1 or pure Sigma1.

    Raises:
        PurityError: when the formula is none of them
    """
    prefix = []
    matrix = formula
    while isinstance(matrix, Exists):
        prefix.append(matrix.var)
        matrix = matrix.body
    if not is_pure_delta0(matrix):
        raise PurityError(f'not a pure bounded formula: {to_text(formula)[:120]}')
    if not prefix:
        kind = Purity.DELTA0
    elif len(prefix) == 1:
        kind = Purity.ONE_SIGMA1
    else:
        kind = Purity.SIGMA1
    return PurityCertificate(kind=kind, prefix=tuple(prefix), matrix=matrix)


def classify(formula):
    try:
        return certify(formula).kind
    except PurityError:
        return None


def is_pure_one_sigma1(formula):
    return classify(formula) == Purity.ONE_SIGMA1


def purify(formula):
    """
    Rewrite a Sigma1-shaped formula into a truth-equivalent pure 1-Sigma1 formula.

    Term literals are lowered to graph atoms over fresh witnesses, then every
    unbounded existential is bounded by one fresh leading variable.

    Args:
        formula (Formula): built from arithmetical atoms, connectives, bounded
            quantifiers and existential quantifiers in positive position

    Returns:
        Purified: the formula and its certificate

    Raises:
        PurityError: when an unbounded universal quantifier occurs
    """
    if classify(formula) == Purity.ONE_SIGMA1:
        return Purified(formula, certify(formula))
    names = FreshNames(formula.variables)
    normal = _lower_literals(negation_normal_form(formula), names)

    prefix_var, body = None, normal
    if isinstance(normal, Exists) and is_pure_delta0(normal.body):
        result = normal
    else:
        prefix_var = names('c')
        body = _bound_existentials(normal, prefix_var)
        result = Exists(prefix_var, body)
    certificate = certify(result)
    if certificate.kind != Purity.ONE_SIGMA1:
        raise PurityError(f'purification failed for {to_text(formula)[:120]}')
    logger.debug('purified formula of size %d into size %d', size(formula), size(result))
    return Purified(result, certificate)


def _lower_literals(formula, names):
    if isinstance(formula, (Bot, Top)):
        return formula
    if isinstance(formula, Atom):
        return _lower_literal(formula, names, positive=True)
    if isinstance(formula, Not):
        return _lower_literal(formula.body, names, positive=False)
    if isinstance(formula, (And, Or)):
        return type(formula)(_lower_literals(formula.left, names), _lower_literals(formula.right, names))
    if isinstance(formula, Forall):
        raise PurityError(f'unbounded universal quantifier over {formula.var}')
    if isinstance(formula, (Exists,) + BOUNDED_QUANTIFIERS):
        return rebuild(formula, body=_lower_literals(formula.body, names))
    raise PurityError(f'unexpected {type(formula).__name__} in negation normal form')


def _lower_literal(atom, names, positive):
    if atom.symbol not in _PURE_ATOM_ARITIES or _PURE_ATOM_ARITIES[atom.symbol] != len(atom.args):
        raise PurityError(f'{atom.symbol} is not an arithmetical atom')
    if all(is_variable(arg) for arg in atom.args):
        return atom if positive else Not(atom)
    witnesses, graphs, core = lower_atom(atom, names)
    if core is None:
        if positive:
            return exists_block(witnesses, conjunction(graphs))
        # the last graph atom pins the value, negate it against a fresh output
        *defining, last = graphs
        other = names('w')
        defining.append(Atom(last.symbol, last.args[:-1] + (other,)))
        literal = Not(Atom('=', (other, last.args[-1])))
        return exists_block(witnesses + (other,), conjunction(defining + [literal]))
    literal = core if positive else Not(core)
    return exists_block(witnesses, conjunction(graphs + [literal]))


def _bound_existentials(formula, bound):
    if isinstance(formula, Exists):
        return BExists(formula.var, bound, False, _bound_existentials(formula.body, bound))
    if isinstance(formula, (Atom, Bot, Top, Not)):
        return formula
    if isinstance(formula, BINARY_CONNECTIVES):
        return type(formula)(_bound_existentials(formula.left, bound), _bound_existentials(formula.right, bound))
    return rebuild(formula, body=_bound_existentials(formula.body, bound))


def substitute_numeral(formula, var, value, avoid=()):
    """
    Plug the value ``value`` in for ``var`` and re-normalise to pure 1-Sigma1 form.

    The numeral is introduced through its compact defining formula, so the
    result stays within the pure grammar.
    """
    names = FreshNames(formula.variables | set(avoid))
    holder = names('v')
    body = substitute(formula, {var: holder})
    return purify(Exists(holder, And(numeral_formula(value, holder, names.used), body))).formula


# Compact numerals

def numeral_formula(n, target, avoid=()):
    """
    Return a pure Delta0 formula with free variable ``target`` defining the value ``n``.

    args:
        n (int): the value
        target (str): the variable receiving the value
        avoid (iterable): names the helper variables must not use
    """
    if n < 0:
        raise ValueError(f'numerals are defined for natural numbers, got {n}')
    names = FreshNames(set(avoid) | {target})
    if n <= NUMERAL_CHAIN_LIMIT:
        return _numeral_chain(n, target, target, names)
    level = 0
    while 2 ** (2 ** (level + 1)) <= n:
        level += 1
    powers = [names(f'p{j}') for j in range(level + 1)]
    body = _numeral_tree(n, level, target, target, powers, names)
    for j in range(level, 0, -1):
        body = BExists(powers[j], target, False, And(Atom('M', (powers[j - 1], powers[j - 1], powers[j])), body))
    return BExists(powers[0], target, False, And(_numeral_chain(2, powers[0], target, names), body))


def _numeral_chain(n, output, bound, names):
    if n == 0:
        return Atom('Z', (output,))
    previous = names('n')
    steps = [(previous, None)]
    for _ in range(n - 1):
        current = names('n')
        steps.append((current, previous))
        previous = current
    body = Atom('S', (previous, output))
    for current, before in reversed(steps):
        head = Atom('Z', (current,)) if before is None else Atom('S', (before, current))
        body = BExists(current, bound, False, And(head, body)) if current != bound else And(head, body)
    return body


def _numeral_tree(n, level, output, bound, powers, names):
    if n < 2 or level < 0:
        return _numeral_chain(n, output, bound, names)
    width = 2 ** level
    high, low = n >> width, n & ((1 << width) - 1)
    if high == 0:
        return _numeral_tree(low, level - 1, output, bound, powers, names)
    power = powers[level]
    if high == 1:
        scaled, scaled_def = power, None
    else:
        scaled = names('m')
        high_var = names('h')
        scaled_def = (high_var, scaled)
    if low == 0:
        if scaled_def is None:
            return Atom('=', (power, output))
        high_var, _ = scaled_def
        return BExists(
            high_var, bound, False,
            And(_numeral_tree(high, level - 1, high_var, bound, powers, names), Atom('M', (high_var, power, output))),
        )
    low_var = names('l')
    tail = BExists(
        low_var, bound, False,
        And(_numeral_tree(low, level - 1, low_var, bound, powers, names), Atom('A', (scaled, low_var, output))),
    )
    if scaled_def is None:
        return tail
    high_var, _ = scaled_def
    return BExists(
        high_var, bound, False,
        And(
            _numeral_tree(high, level - 1, high_var, bound, powers, names),
            BExists(scaled, bound, False, And(Atom('M', (high_var, power, scaled)), tail)),
        ),
    )


# Canonical text

def term_text(term):
    if isinstance(term, str):
        return term
    args = term.args
    if term.symbol == 'Z' and not args:
        return '0'
    if term.symbol == 'S' and len(args) == 1:
        return f'S({term_text(args[0])})'
    if term.symbol == 'A' and len(args) == 2:
        return f'({term_text(args[0])} + {term_text(args[1])})'
    if term.symbol == 'M' and len(args) == 2:
        return f'({term_text(args[0])} * {term_text(args[1])})'
    return f'{term.symbol}({", ".join(term_text(arg) for arg in args)})'


def atom_text(atom):
    args = atom.args
    plain = all(is_variable(arg) for arg in args)
    texts = [term_text(arg) for arg in args]
    if atom.symbol == '=' and len(args) == 2:
        return f'{texts[0]} = {texts[1]}'
    if atom.symbol == '<' and len(args) == 2:
        return f'{texts[0]} < {texts[1]}'
    if atom.symbol == 'Z' and len(args) == 1 and plain:
        return f'0 = {texts[0]}'
    if atom.symbol in GRAPH_ARITIES and atom.symbol != 'Z' and len(args) == GRAPH_ARITIES[atom.symbol] and plain:
        if atom.symbol == 'S':
            return f'S {texts[0]} = {texts[1]}'
        return f'{atom.symbol} {" ".join(texts)}'
    if atom.symbol in ('S', 'A', 'M'):
        return f'{atom.symbol}[{", ".join(texts)}]'
    if not args:
        return atom.symbol
    return f'{atom.symbol}({", ".join(texts)})'


_CONNECTIVE_TEXT = {And: '&', Or: '|', Implies: '->'}


def to_text(formula):
    """Print a formula in the fully parenthesised canonical syntax."""
    if isinstance(formula, Bot):
        return 'bot'
    if isinstance(formula, Top):
        return 'top'
    if isinstance(formula, Atom):
        return atom_text(formula)
    if isinstance(formula, Not):
        return f'~{to_text(formula.body)}'
    if isinstance(formula, BINARY_CONNECTIVES):
        return f'({to_text(formula.left)} {_CONNECTIVE_TEXT[type(formula)]} {to_text(formula.right)})'
    if isinstance(formula, QUANTIFIERS):
        letter = 'A' if isinstance(formula, Forall) else 'E'
        return f'({letter} {formula.var}. {to_text(formula.body)})'
    if isinstance(formula, BOUNDED_QUANTIFIERS):
        letter = 'A' if isinstance(formula, BForall) else 'E'
        relation = '<' if formula.strict else '<='
        return f'({letter} {formula.var} {relation} {formula.bound}. {to_text(formula.body)})'
    render = getattr(formula, 'render', None)
    if render is not None:
        return to_text(render())
    raise ValueError(f'cannot print {type(formula).__name__}')
