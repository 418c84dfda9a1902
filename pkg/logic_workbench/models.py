import dataclasses
import itertools
import json
import logging
import re
from typing import Dict, FrozenSet, NamedTuple, Optional, Tuple

from . import limits
from . import syntax


logger = logging.getLogger(__name__)

_MISSING = object()
_CANDIDATE_CAP = 512
_JAN_ATOM = re.compile(r'J(\d+)$')
_MAX_BUILT_SIZE = 4096


class EvaluationError(ValueError):
    """Raised when a formula cannot be evaluated in a structure."""


class BudgetExceededError(RuntimeError):
    """Raised when an exhaustive search would exceed its node budget."""


class ScatElement(NamedTuple):
    """Element ``m`` of the class of size ``n`` of the scattered model."""
    n: int
    m: int

    def __str__(self):
        return f'<{self.n},{self.m}>'


# Kleene connectives, None is unknown

def k_not(value):
    return None if value is None else not value


def k_and(left, right):
    if left is False or right is False:
        return False
    if left is None or right is None:
        return None
    return True


def k_or(left, right):
    if left is True or right is True:
        return True
    if left is None or right is None:
        return None
    return False


@dataclasses.dataclass(frozen=True, eq=False)
class FiniteStructure:
    """
    A finite structure with elements ``0 .. size - 1``.

    Args:
        size (int): universe size, at least 1
        signature (Signature): the symbols interpreted
        relations (dict): relation name to a frozenset of tuples
        graphs (dict): function name (or functional relation name) to a dict from input tuples to outputs;
            a missing entry means the relation holds for no output
        constants (dict): constant name to element
        labels (tuple): display names of the elements
        name (str): a short description
    """
    size: int
    signature: syntax.Signature
    relations: Dict[str, FrozenSet[Tuple[int, ...]]] = dataclasses.field(default_factory=dict)
    graphs: Dict[str, Dict[Tuple[int, ...], int]] = dataclasses.field(default_factory=dict)
    constants: Dict[str, int] = dataclasses.field(default_factory=dict)
    labels: Optional[Tuple] = None
    name: str = ''

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f'structures are nonempty, got size {self.size}')
        below = [[] for _ in range(self.size)]
        above = [[] for _ in range(self.size)]
        for x, y in sorted(self.relations.get('<', ())):
            below[y].append(x)
            above[x].append(y)
        object.__setattr__(self, '_below', tuple(tuple(items) for items in below))
        object.__setattr__(self, '_above', tuple(frozenset(items) for items in above))
        object.__setattr__(self, '_below_sets', tuple(frozenset(items) for items in below))

    @property
    def elements(self):
        return range(self.size)

    def label(self, element):
        return str(self.labels[element]) if self.labels else str(element)

    def index(self, label):
        return self.labels.index(label) if self.labels else label

    def holds(self, symbol, args):
        args = tuple(args)
        if symbol == '=':
            return args[0] == args[1]
        table = self.relations.get(symbol)
        if table is not None:
            return args in table
        graph = self.graphs.get(symbol)
        if graph is not None:
            return graph.get(args[:-1], _MISSING) == args[-1]
        if symbol in self.constants and len(args) == 1:
            return self.constants[symbol] == args[0]
        raise syntax.SignatureError(f'symbol {symbol} is not interpreted in {self.name or "this structure"}')

    def apply(self, symbol, values):
        if not values and symbol in self.constants:
            return self.constants[symbol]
        graph = self.graphs.get(symbol)
        if graph is None:
            raise syntax.SignatureError(f'function {symbol} is not interpreted in {self.name or "this structure"}')
        try:
            return graph[tuple(values)]
        except KeyError:
            raise EvaluationError(f'{symbol} is undefined on {values}') from None

    def graph_candidates(self, symbol, inputs):
        graph = self.graphs.get(symbol)
        if graph is not None:
            value = graph.get(tuple(inputs), _MISSING)
            return frozenset() if value is _MISSING else frozenset([value])
        if not inputs and symbol in self.constants:
            return frozenset([self.constants[symbol]])
        return None

    def order_guard(self, element, bound, strict):
        if element in self._below_sets[bound]:
            return True
        return not strict and element == bound

    def bounded_domain(self, bound, strict):
        if strict:
            return self._below[bound]
        return self._below[bound] + (bound,)

    def above(self, bound):
        return self._above[bound]

    def below(self, bound):
        return self._below[bound]

    def to_json(self):
        relations = {name: [list(args) for args in sorted(table)] for name, table in self.relations.items()}
        functions = {name: value for name, value in self.constants.items()}
        for name, graph in self.graphs.items():
            arity = _graph_arity(graph)
            if len(graph) == self.size ** arity:
                functions[name] = _nested_table(graph, arity, self.size)
            else:
                relations[name] = [list(inputs) + [output] for inputs, output in sorted(graph.items())]
        data = {'universe_size': self.size, 'relations': relations, 'functions': functions}
        if self.name:
            data['name'] = self.name
        return data

    @classmethod
    def from_json(cls, data):
        """Build a structure from its JSON object, validating totality and range."""
        try:
            size = int(data['universe_size'])
        except (KeyError, TypeError, ValueError):
            raise ValueError('model file needs an integer universe_size') from None
        relations, graphs, constants = {}, {}, {}
        relation_arities, function_arities = [], []
        for name, tuples in data.get('relations', {}).items():
            table = frozenset(tuple(int(x) for x in args) for args in tuples)
            arities = {len(args) for args in table}
            if len(arities) > 1:
                raise ValueError(f'relation {name} mixes arities {sorted(arities)}')
            for args in table:
                _check_range(name, args, size)
            relations[name] = table
            relation_arities.append((name, arities.pop() if arities else 0))
        for name, table in data.get('functions', {}).items():
            if isinstance(table, int):
                _check_range(name, (table,), size)
                constants[name] = table
                continue
            graph = _flatten_table(name, table, size)
            graphs[name] = graph
            function_arities.append((name, _graph_arity(graph)))
        signature = syntax.Signature(
            relations=tuple(relation_arities), functions=tuple(function_arities), constants=tuple(constants),
        )
        return cls(size, signature, relations, graphs, constants, name=data.get('name', ''))


def _graph_arity(graph):
    return len(next(iter(graph))) if graph else 0


def _check_range(name, args, size):
    for value in args:
        if not 0 <= value < size:
            raise ValueError(f'{name}: value {value} outside universe of size {size}')


def _nested_table(graph, arity, size):
    if arity == 0:
        return graph[()]

    def build(prefix):
        if len(prefix) == arity:
            return graph[prefix]
        return [build(prefix + (x,)) for x in range(size)]
    return build(())


def _flatten_table(name, table, size):
    graph = {}

    def walk(node, prefix):
        if isinstance(node, list):
            if len(node) != size:
                raise ValueError(f'function {name} table is not total at {list(prefix)}')
            for x, child in enumerate(node):
                walk(child, prefix + (x,))
        else:
            _check_range(name, (int(node),), size)
            graph[prefix] = int(node)
    walk(table, ())
    return graph


def load_model(path):
    with open(path, encoding='utf-8') as handle:
        return FiniteStructure.from_json(json.load(handle))


def dump_model(structure, path):
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(structure.to_json(), handle, indent=2, sort_keys=True)


class JanStructure(FiniteStructure):
    """Equivalence structure that also reads ``J<n>`` as 'some class has n + 1 elements'."""

    def holds(self, symbol, args):
        match = _JAN_ATOM.match(symbol)
        if match and not args:
            return int(match.group(1)) + 1 in self.class_sizes
        return super().holds(symbol, args)

    @property
    def class_sizes(self):
        return tuple(sorted({len(members) for members in self.classes}))

    @property
    def classes(self):
        groups = {}
        for element, (cls, _) in enumerate(self.labels):
            groups.setdefault(cls, []).append(element)
        return [tuple(members) for _, members in sorted(groups.items())]


class NaturalNumbers:
    """
    The standard model of arithmetic.

    Bounded quantifiers and solvable witnesses are exact; other unbounded
    quantifiers search the elements below ``witness_bound``.
    """
    name = 'N'
    signature = syntax.ARITHMETIC
    # every finite set of elements has a strict upper bound
    unbounded = True

    def __init__(self, witness_bound=None):
        self.witness_bound = limits.check_bound('witness bound', witness_bound, limits.get_witness_bound)

    @property
    def elements(self):
        return range(self.witness_bound)

    def label(self, element):
        return str(element)

    def holds(self, symbol, args):
        if symbol == '=':
            return args[0] == args[1]
        if symbol == '<':
            return args[0] < args[1]
        if symbol in syntax.GRAPH_ARITIES:
            return self.apply(symbol, args[:-1]) == args[-1]
        raise syntax.SignatureError(f'symbol {symbol} is not arithmetical')

    def apply(self, symbol, values):
        if symbol == 'Z' and not values:
            return 0
        if symbol == 'S' and len(values) == 1:
            return values[0] + 1
        if symbol == 'A' and len(values) == 2:
            return values[0] + values[1]
        if symbol == 'M' and len(values) == 2:
            return values[0] * values[1]
        raise syntax.SignatureError(f'function {symbol}/{len(values)} is not arithmetical')

    def graph_candidates(self, symbol, inputs):
        if symbol in syntax.GRAPH_ARITIES and len(inputs) == syntax.GRAPH_ARITIES[symbol] - 1:
            return frozenset([self.apply(symbol, inputs)])
        return None

    def order_guard(self, element, bound, strict):
        return element < bound or (not strict and element == bound)

    def bounded_domain(self, bound, strict):
        return range(bound) if strict else range(bound + 1)

    def above(self, bound):  # pylint: disable=unused-argument
        return None


class PartialStructure:
    """A structure under construction, unknown entries evaluate to unknown."""

    def __init__(self, size, signature):
        self.size = size
        self.signature = signature
        self.name = f'partial structure of size {size}'
        self.relations = {name: {} for name, _ in signature.relations}
        self.graphs = {name: {} for name, _ in signature.functions}
        self.constants = {}

    @property
    def elements(self):
        return range(self.size)

    def label(self, element):
        return str(element)

    def holds(self, symbol, args):
        args = tuple(args)
        if symbol == '=':
            return args[0] == args[1]
        if symbol in self.relations:
            return self.relations[symbol].get(args)
        if symbol in self.graphs:
            value = self.graphs[symbol].get(args[:-1])
            return None if value is None else value == args[-1]
        if symbol in self.signature.constants and len(args) == 1:
            value = self.constants.get(symbol)
            return None if value is None else value == args[0]
        raise syntax.SignatureError(f'symbol {symbol} is not in the signature')

    def apply(self, symbol, values):
        if not values and symbol in self.signature.constants:
            return self.constants.get(symbol)
        if symbol not in self.graphs:
            raise syntax.SignatureError(f'function {symbol} is not in the signature')
        return self.graphs[symbol].get(tuple(values))

    def graph_candidates(self, symbol, inputs):
        if symbol in self.graphs or (not inputs and symbol in self.signature.constants):
            value = self.apply(symbol, inputs)
            return None if value is None else frozenset([value])
        return None

    def order_guard(self, element, bound, strict):
        guard = self.holds('<', (element, bound)) if '<' in self.relations else False
        if strict:
            return guard
        return k_or(guard, element == bound)

    def bounded_domain(self, bound, strict):
        return [x for x in self.elements if self.order_guard(x, bound, strict) is not False]

    def above(self, bound):
        if '<' not in self.relations:
            return frozenset()
        return frozenset(x for x in self.elements if self.holds('<', (bound, x)) is not False)

    def freeze(self, name=''):
        relations = {name_: frozenset(args for args, value in table.items() if value)
                     for name_, table in self.relations.items()}
        graphs = {name_: dict(table) for name_, table in self.graphs.items()}
        return FiniteStructure(self.size, self.signature, relations, graphs, dict(self.constants), name=name)


class Evaluator:
    """
    Three-valued evaluation of formulas in a structure.

    Quantifier nodes are memoised per values of their free variables, and
    existential witnesses are taken from defining atoms when possible.
    """

    def __init__(self, structure, memoize=True):
        self.structure = structure
        self.memoize = memoize
        self._memo = {}
        self._candidate_memo = {}
        self._lifted = {}

    def evaluate(self, formula, assignment=None):
        """
        Return True, False or None (unknown) for ``formula`` under ``assignment``.

        Raises:
            EvaluationError: when a free variable is unassigned
        """
        env = dict(assignment or {})
        missing = formula.free_variables - env.keys()
        if missing:
            raise EvaluationError(f'unassigned free variables: {", ".join(sorted(missing))}')
        return self._eval(formula, env)

    def satisfies(self, formula, assignment=None):
        value = self.evaluate(formula, assignment)
        if value is None:
            raise EvaluationError(f'truth value unknown in {self.structure.name or "structure"}')
        return value

    def term_value(self, term, env):
        if isinstance(term, str):
            return env[term]
        values = []
        for arg in term.args:
            value = self.term_value(arg, env)
            if value is None:
                return None
            values.append(value)
        return self.structure.apply(term.symbol, tuple(values))

    def _eval(self, node, env):
        if isinstance(node, syntax.Atom):
            values = []
            for arg in node.args:
                value = env[arg] if isinstance(arg, str) else self.term_value(arg, env)
                if value is None:
                    return None
                values.append(value)
            return self.structure.holds(node.symbol, values)
        if isinstance(node, syntax.Not):
            return k_not(self._eval(node.body, env))
        if isinstance(node, syntax.And):
            left = self._eval(node.left, env)
            if left is False:
                return False
            return k_and(left, self._eval(node.right, env))
        if isinstance(node, syntax.Or):
            left = self._eval(node.left, env)
            if left is True:
                return True
            return k_or(left, self._eval(node.right, env))
        if isinstance(node, syntax.Implies):
            left = self._eval(node.left, env)
            if left is False:
                return True
            return k_or(k_not(left), self._eval(node.right, env))
        if isinstance(node, syntax.Top):
            return True
        if isinstance(node, syntax.Bot):
            return False
        if isinstance(node, syntax.QUANTIFIERS + syntax.BOUNDED_QUANTIFIERS):
            if not self.memoize:
                return self._quantify(node, env)
            entry = self._memo.get(id(node))
            if entry is None:
                entry = self._memo[id(node)] = (node, tuple(sorted(node.free_variables)), {})
            _, keys, table = entry
            key = tuple(env[var] for var in keys)
            if key not in table:
                table[key] = self._quantify(node, env)
            return table[key]
        evaluate_with = getattr(node, 'evaluate_with', None)
        if evaluate_with is not None:
            return evaluate_with(self, env)
        raise EvaluationError(f'cannot evaluate {type(node).__name__}')

    def _quantify(self, node, env):
        if isinstance(node, syntax.Exists) and getattr(self.structure, 'unbounded', False):
            entry = self._lifted.get(id(node))
            if entry is None or entry[0] is not node:
                entry = self._lifted[id(node)] = (node, lift_bound(node))
            if entry[1] is not None:
                return self._eval(entry[1], env)
        existential = isinstance(node, (syntax.Exists, syntax.BExists))
        body = node.body
        if existential:
            candidates = self._candidates(body, node.var, env)
        elif isinstance(body, syntax.Implies):
            candidates = self._candidates(body.left, node.var, env)
        else:
            candidates = None

        bounded = isinstance(node, syntax.BOUNDED_QUANTIFIERS)
        if bounded:
            bound = env[node.bound]
            if candidates is None:
                domain = self.structure.bounded_domain(bound, node.strict)
            else:
                domain = sorted(candidates)
        else:
            domain = self.structure.elements if candidates is None else sorted(candidates)

        var = node.var
        saved = env.get(var, _MISSING)
        result = False if existential else True
        try:
            for element in domain:
                guard = self.structure.order_guard(element, bound, node.strict) if bounded else True
                if guard is False:
                    continue
                env[var] = element
                value = self._eval(body, env)
                value = k_and(guard, value) if existential else k_or(k_not(guard), value)
                if existential:
                    result = k_or(result, value)
                    if result is True:
                        break
                else:
                    result = k_and(result, value)
                    if result is False:
                        break
        finally:
            if saved is _MISSING:
                env.pop(var, None)
            else:
                env[var] = saved
        return result

    def _value_if_assigned(self, term, var, env):
        if var in syntax.term_variables(term):
            return None
        if isinstance(term, str):
            return env.get(term)
        if not all(name in env for name in term.variables):
            return None
        return self.term_value(term, env)

    def _candidates(self, node, var, env):
        """A superset of the values of ``var`` for which ``node`` may hold, or None."""
        if var not in node.free_variables:
            return None
        key = (id(node), var, tuple(env.get(name, _MISSING) for name in sorted(node.free_variables) if name != var))
        entry = self._candidate_memo.get(key[0])
        if entry is None or entry[0] is not node:
            entry = self._candidate_memo[key[0]] = (node, {})
        table = entry[1]
        if key[1:] not in table:
            table[key[1:]] = self._solve(node, var, env)
        return table[key[1:]]

    def _solve(self, node, var, env):
        if isinstance(node, syntax.Atom):
            return self._solve_atom(node, var, env)
        if isinstance(node, syntax.Bot):
            return frozenset()
        if isinstance(node, syntax.And):
            left = self._candidates(node.left, var, env)
            if left is not None and len(left) <= 1:
                return left
            right = self._candidates(node.right, var, env)
            if left is None:
                return right
            if right is None:
                return left
            return left if len(left) <= len(right) else right
        if isinstance(node, syntax.Or):
            left = self._candidates(node.left, var, env)
            if left is None:
                return None
            right = self._candidates(node.right, var, env)
            return None if right is None else left | right
        if isinstance(node, (syntax.Exists, syntax.BExists)):
            inner = self._candidates(node.body, node.var, env)
            if inner is None and isinstance(node, syntax.BExists) and node.bound in env and node.bound != var:
                if env[node.bound] is not None and env[node.bound] <= _CANDIDATE_CAP:
                    inner = list(self.structure.bounded_domain(env[node.bound], node.strict))
            if inner is None or len(inner) > _CANDIDATE_CAP:
                if getattr(self.structure, 'unbounded', False):
                    return self._solve_around(node, var, env)
                return None
            saved = env.get(node.var, _MISSING)
            found = set()
            try:
                for element in inner:
                    env[node.var] = element
                    values = self._candidates(node.body, var, env)
                    if values is None:
                        return None
                    found.update(values)
            finally:
                if saved is _MISSING:
                    env.pop(node.var, None)
                else:
                    env[node.var] = saved
            return frozenset(found)
        return None

    def _solve_around(self, node, var, env):
        """Candidates for ``var`` from the parts of a quantifier body that do not involve its variable."""
        saved = env.pop(node.var, _MISSING)
        try:
            return self._candidates(node.body, var, env)
        finally:
            if saved is not _MISSING:
                env[node.var] = saved

    def _solve_atom(self, atom, var, env):
        args = atom.args
        if atom.symbol == '=' and len(args) == 2:
            for mine, other in (args, args[::-1]):
                if mine == var:
                    value = self._value_if_assigned(other, var, env)
                    if value is not None:
                        return frozenset([value])
            return None
        if atom.symbol == '<' and len(args) == 2:
            left, right = args
            if left == var:
                bound = self._value_if_assigned(right, var, env)
                if bound is None or bound > _CANDIDATE_CAP:
                    return None
                return frozenset(self.structure.bounded_domain(bound, True))
            if right == var:
                bound = self._value_if_assigned(left, var, env)
                return None if bound is None else self.structure.above(bound)
            return None
        if args and args[-1] == var:
            inputs = []
            for arg in args[:-1]:
                value = self._value_if_assigned(arg, var, env)
                if value is None:
                    return None
                inputs.append(value)
            return self.structure.graph_candidates(atom.symbol, tuple(inputs))
        return None


class _Unliftable(Exception):
    pass


def lift_bound(node):
    """
    The body of ``E c. phi`` with every ``E y<c`` turned into ``E y``, or None.

    Only applies when ``c`` occurs solely as the bound of existentials outside
    negations. Over the natural numbers the two forms agree.
    """
    var = node.var

    def lift(formula):
        if var not in formula.free_variables:
            return formula
        if isinstance(formula, syntax.BExists) and formula.bound == var:
            return syntax.Exists(formula.var, lift(formula.body))
        if isinstance(formula, (syntax.And, syntax.Or)):
            return type(formula)(lift(formula.left), lift(formula.right))
        quantified = isinstance(formula, (syntax.Exists, syntax.BExists, syntax.BForall))
        if quantified and getattr(formula, 'bound', None) != var:
            return syntax.rebuild(formula, body=lift(formula.body))
        raise _Unliftable

    try:
        return lift(node.body)
    except _Unliftable:
        return None


def evaluate(structure, formula, assignment=None):
    return Evaluator(structure).evaluate(formula, assignment)


def satisfies(structure, formula, assignment=None):
    return Evaluator(structure).satisfies(formula, assignment)


# Model families

def cutoff_model(z):
    """N_z: the numbers ``0 .. z`` with successor, sum and product cut off at ``z``."""
    if z < 0:
        raise ValueError(f'cutoff must be non negative, got {z}')
    size = z + 1
    elements = range(size)
    graphs = {
        'S': {(x,): min(x + 1, z) for x in elements},
        'A': {(x, y): min(x + y, z) for x in elements for y in elements},
        'M': {(x, y): min(x * y, z) for x in elements for y in elements},
    }
    order = frozenset((x, y) for x in elements for y in elements if x < y)
    return FiniteStructure(size, syntax.ARITHMETIC, {'<': order}, graphs, {'Z': 0}, name=f'N_{z}')


def class_model(n):
    """The class of size ``n`` of the scattered model, in the relational signature without zero."""
    return scat_model(n, classes=(n,))


def scat_model(bound, classes=None):
    """
    The scattered model restricted to its classes of size at most ``bound``.

    Elements are ``ScatElement(n, m)`` with ``m < n``; order, successor, sum and
    product act inside a class, cut off at ``n - 1``.
    """
    if bound < 1:
        raise ValueError(f'scattered models need at least one class, got bound {bound}')
    labels = tuple(ScatElement(n, m) for n in (classes or range(1, bound + 1)) for m in range(n))
    position = {label: index for index, label in enumerate(labels)}
    order, successor, addition, multiplication = set(), {}, {}, {}
    for label, index in position.items():
        n, m = label
        successor[(index,)] = position[ScatElement(n, min(m + 1, n - 1))]
        for other in range(n):
            partner = position[ScatElement(n, other)]
            if m < other:
                order.add((index, partner))
            addition[(index, partner)] = position[ScatElement(n, min(m + other, n - 1))]
            multiplication[(index, partner)] = position[ScatElement(n, min(m * other, n - 1))]
    graphs = {'S': successor, 'A': addition, 'M': multiplication}
    name = f'scat_{bound}' if classes is None else f'class_{"_".join(map(str, classes))}'
    return FiniteStructure(len(labels), syntax.SCATTERED, {'<': frozenset(order)}, graphs, labels=labels, name=name)


def jan_model(sizes):
    """An equivalence relation ``E`` with one class per entry of ``sizes``."""
    sizes = tuple(sizes)
    if not sizes or any(size < 1 for size in sizes):
        raise ValueError(f'jan models need nonempty classes, got {sizes}')
    labels = tuple((cls, i) for cls, size in enumerate(sizes) for i in range(size))
    relation = frozenset(
        (x, y) for x, (cx, _) in enumerate(labels) for y, (cy, _) in enumerate(labels) if cx == cy
    )
    name = 'jan_' + '_'.join(map(str, sizes))
    return JanStructure(len(labels), syntax.JAN, {'E': relation}, labels=labels, name=name)


def build_model(description):
    """
    Build a model from a shorthand: ``n_cutoff:z``, ``scat:K``, ``class:n`` or ``jan:2,2,3``.

    Raises:
        ValueError: on an unknown shorthand or a bad parameter
    """
    kind, _, argument = description.partition(':')
    try:
        if kind == 'n_cutoff':
            structure = cutoff_model(int(argument))
        elif kind == 'scat':
            structure = scat_model(int(argument))
        elif kind == 'class':
            structure = class_model(int(argument))
        elif kind == 'jan':
            structure = jan_model(int(size) for size in argument.split(','))
        else:
            raise ValueError(f'unknown model kind {kind!r}')
    except ValueError as e:
        raise ValueError(f'bad model description {description!r}: {e}') from e
    if structure.size > _MAX_BUILT_SIZE:
        raise ValueError(f'model {description} is too large')
    return structure


# Exhaustive search

def natural_order(size):
    return {(x, y): x < y for x in range(size) for y in range(size)}


NATURAL_ORDER = {'<': natural_order}
NATURAL_ORDER_AND_ZERO = {'<': natural_order, 'Z': lambda size: 0}


def symbols_of(formula):
    """Relation, function and constant symbols occurring in ``formula``."""
    found = set()

    def term_symbols(term):
        if not isinstance(term, str):
            found.add(term.symbol)
            for arg in term.args:
                term_symbols(arg)
    for node in syntax.iter_nodes(formula):
        if isinstance(node, syntax.Atom):
            found.add(node.symbol)
            for arg in node.args:
                term_symbols(arg)
    return found


def _conjuncts(formula):
    if isinstance(formula, syntax.And):
        return _conjuncts(formula.left) + _conjuncts(formula.right)
    return [formula]


def enumerate_models(signature, max_size, constraint=None, fixed=None, budget=None, min_size=1):
    """
    Yield every structure of size ``min_size .. max_size`` satisfying ``constraint``.

    Tables are filled in lexicographic order (constants, relation entries,
    function entries); a branch is cut as soon as a conjunct of the
    constraint is false on the partial structure.

    Args:
        signature (Signature): symbols to interpret
        max_size (int): largest universe size
        constraint (Formula): a sentence, ``top`` when omitted
        fixed (dict): symbol to a callable returning its table for a given size
        budget (int): maximal number of search nodes

    Raises:
        BudgetExceededError: when the search needs more than ``budget`` nodes
    """
    max_size = limits.check_bound('model size', max_size, limits.get_max_model_size)
    budget = limits.check_bound('enumeration budget', budget, limits.get_enumeration_budget)
    constraint = constraint if constraint is not None else syntax.TOP
    if constraint.free_variables:
        raise EvaluationError('the enumeration constraint must be a sentence')
    fixed = fixed or {}
    conjuncts = [(part, symbols_of(part)) for part in _conjuncts(constraint)]
    nodes = [0]
    for size in range(min_size, max_size + 1):
        yield from _enumerate_size(signature, size, conjuncts, fixed, budget, nodes)
    logger.debug('enumeration visited %d nodes', nodes[0])


def _slots(signature, size, fixed):
    slots = []
    for name in signature.constants:
        if name not in fixed:
            slots.append(('constant', name, (), range(size)))
    for name, arity in signature.relations:
        if name not in fixed:
            for args in itertools.product(range(size), repeat=arity):
                slots.append(('relation', name, args, (False, True)))
    for name, arity in signature.functions:
        if name not in fixed:
            for args in itertools.product(range(size), repeat=arity):
                slots.append(('function', name, args, range(size)))
    return slots


def _enumerate_size(signature, size, conjuncts, fixed, budget, nodes):
    partial = PartialStructure(size, signature)
    for name, table in fixed.items():
        value = table(size)
        if name in signature.constants:
            partial.constants[name] = value
        elif name in partial.relations:
            partial.relations[name] = dict(value)
        elif name in partial.graphs:
            partial.graphs[name] = dict(value)
        else:
            raise syntax.SignatureError(f'fixed symbol {name} is not in the signature')
    slots = _slots(signature, size, fixed)
    pending = list(range(len(conjuncts)))

    def consistent(open_conjuncts, symbol):
        remaining = []
        for index in open_conjuncts:
            part, symbols = conjuncts[index]
            if symbol is not None and symbol not in symbols:
                remaining.append(index)
                continue
            value = Evaluator(partial, memoize=False).evaluate(part)
            if value is False:
                return None
            if value is None:
                remaining.append(index)
        return remaining

    def search(position, open_conjuncts):
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceededError(f'model enumeration exceeded its budget of {budget} nodes')
        if position == len(slots):
            if not open_conjuncts:
                yield partial.freeze(name=f'model of size {size}')
            return
        kind, name, args, values = slots[position]
        for value in values:
            if kind == 'constant':
                partial.constants[name] = value
            elif kind == 'relation':
                partial.relations[name][args] = value
            else:
                partial.graphs[name][args] = value
            remaining = consistent(open_conjuncts, name)
            if remaining is not None:
                yield from search(position + 1, remaining)
        if kind == 'constant':
            del partial.constants[name]
        elif kind == 'relation':
            del partial.relations[name][args]
        else:
            del partial.graphs[name][args]

    start = consistent(pending, None)
    if start is not None:
        yield from search(0, start)


def is_isomorphic(left, right):
    """Decide isomorphism of two finite structures by permutation search."""
    if left.size != right.size:
        return False
    for name in set(left.constants) | set(right.constants):
        if name not in left.constants or name not in right.constants:
            return False
    symbols = sorted(set(left.relations) | set(left.graphs))
    if symbols != sorted(set(right.relations) | set(right.graphs)):
        return False
    facts = []
    for name in symbols:
        facts.extend((name, args) for args in _facts(left, name))
    target = {(name, args) for name in symbols for args in _facts(right, name)}
    for permutation in itertools.permutations(range(left.size)):
        if any(permutation[left.constants[name]] != right.constants[name] for name in left.constants):
            continue
        if all((name, tuple(permutation[x] for x in args)) in target for name, args in facts):
            return len(facts) == len(target)
    return False


def _facts(structure, name):
    if name in structure.relations:
        return sorted(structure.relations[name])
    return sorted(inputs + (output,) for inputs, output in structure.graphs[name].items())


def cutoff_models(max_size, constraint=None):
    """The models N_z with ``z < max_size`` satisfying ``constraint``."""
    found = []
    for z in range(max_size):
        structure = cutoff_model(z)
        if constraint is None or satisfies(structure, constraint):
            found.append(structure)
    return found


# Extensions of a cutoff model

class _RecordingStructure(PartialStructure):
    """A partial structure that remembers the first unknown table entry it was asked for."""

    def __init__(self, size, signature):
        super().__init__(size, signature)
        self.missing = None

    def holds(self, symbol, args):
        args = tuple(args)
        value = super().holds(symbol, args)
        if value is None and self.missing is None:
            if symbol in self.relations:
                self.missing = ('relation', symbol, args)
            elif symbol in self.graphs:
                self.missing = ('function', symbol, args[:-1])
            else:
                self.missing = ('constant', symbol, ())
        return value

    def apply(self, symbol, values):
        value = super().apply(symbol, values)
        if value is None and self.missing is None:
            if not values and symbol in self.signature.constants:
                self.missing = ('constant', symbol, ())
            else:
                self.missing = ('function', symbol, tuple(values))
        return value

    def assign(self, slot, value):
        kind, name, args = slot
        if kind == 'constant':
            self.constants[name] = value
        elif kind == 'relation':
            self.relations[name][args] = value
        else:
            self.graphs[name][args] = value

    def unassign(self, slot):
        kind, name, args = slot
        if kind == 'constant':
            del self.constants[name]
        elif kind == 'relation':
            del self.relations[name][args]
        else:
            del self.graphs[name][args]

    def assigned(self, slot):
        kind, name, args = slot
        if kind == 'constant':
            return name in self.constants
        if kind == 'relation':
            return args in self.relations[name]
        return args in self.graphs[name]


_OPERATIONS = {'S': (1, lambda x: x + 1), 'A': (2, lambda x, y: x + y), 'M': (2, lambda x, y: x * y)}


def extension_choices(size, cut):
    """
    The values allowed for each table entry of an arithmetic structure of ``size``
    elements whose elements ``0 .. cut`` make ``cut |= TN`` true.

    Elements up to the cut are ordered naturally and no element above it is below
    the cut. An operation on numbers up to the cut is exact when its value is below
    the cut, otherwise it lands on the cut or above it. Every other entry is free.
    """
    if not 0 <= cut < size:
        raise ValueError(f'cut {cut} outside a universe of size {size}')
    everything = tuple(range(size))
    high = (cut,) + tuple(range(cut + 1, size))
    choices = {('constant', 'Z', ()): (0,)}
    for x, y in itertools.product(everything, repeat=2):
        if x <= cut and y <= cut:
            allowed = (x < y,)
        elif y == cut:
            allowed = (False,)
        else:
            allowed = (False, True)
        choices['relation', '<', (x, y)] = allowed
    for name, (arity, operation) in _OPERATIONS.items():
        for args in itertools.product(everything, repeat=arity):
            if max(args) <= cut:
                value = operation(*args)
                allowed = (value,) if value < cut else high
            else:
                allowed = everything
            choices['function', name, args] = allowed
    return choices


class ExtensionSearch:
    """
    Search the models of ``E z. (constraint & z |= TN)`` of bounded size.

    Up to isomorphism such a model is an extension of the elements ``0 .. m`` of a
    cut ``m``, see ``extension_choices``. The search walks the sizes and cuts,
    evaluates ``constraint`` at the cut on the partial structure and branches only
    on the table entry the evaluation asked for. A branch stops when the
    constraint is decided; when it is true every completion is a model and one of
    them is yielded.

    Args:
        max_size (int): largest universe size
        budget (int): maximal number of partial structures examined
    """

    def __init__(self, max_size=None, budget=None):
        self.max_size = limits.check_bound('model size', max_size, limits.get_max_model_size)
        self.budget = limits.check_bound('enumeration budget', budget, limits.get_enumeration_budget)
        self.examined = 0

    def models(self, constraint, cut='z'):
        """
        Yield one completed structure per family of models found.

        Raises:
            EvaluationError: when ``constraint`` has free variables other than ``cut``
            BudgetExceededError: when more than ``budget`` partial structures are needed
        """
        if constraint.free_variables - {cut}:
            raise EvaluationError(f'the extension constraint may only have {cut} free')
        for size in range(1, self.max_size + 1):
            for value in range(size):
                choices = extension_choices(size, value)
                partial = _RecordingStructure(size, syntax.ARITHMETIC)
                for slot, allowed in choices.items():
                    if len(allowed) == 1:
                        partial.assign(slot, allowed[0])
                name = f'extension of N_{value} to {size} elements'
                yield from self._search(partial, choices, constraint, {cut: value}, name)
        logger.debug('extension search examined %d partial structures', self.examined)

    def _search(self, partial, choices, constraint, assignment, name):
        self.examined += 1
        if self.examined > self.budget:
            raise BudgetExceededError(f'extension search exceeded its budget of {self.budget} structures')
        partial.missing = None
        value = Evaluator(partial).evaluate(constraint, assignment)
        if value is False:
            return
        if value is True:
            yield _complete(partial, choices, name)
            return
        slot = partial.missing
        if slot is None:
            raise EvaluationError('unknown truth value without an open table entry')
        for allowed in choices[slot]:
            partial.assign(slot, allowed)
            yield from self._search(partial, choices, constraint, assignment, name)
        partial.unassign(slot)


def _complete(partial, choices, name):
    filled = []
    for slot, allowed in choices.items():
        if not partial.assigned(slot):
            partial.assign(slot, allowed[0])
            filled.append(slot)
    structure = partial.freeze(name=name)
    for slot in filled:
        partial.unassign(slot)
    return structure
