"""Bijective numbering of the relational formulas of a signature.

A code is read relative to a depth ``d``, the number of variables in scope
(named ``v0`` to ``v<d-1>`` from the outside in). The first codes at depth ``d``
are the leaves: ``bot``, ``top``, every relation applied to every tuple of
in-scope variables, then every equation. Larger codes split into a
constructor and a payload; quantifiers read their body at depth ``d + 1`` and
binary connectives split the payload with ``pair``.
"""
import dataclasses
import functools
import itertools
import logging

from . import syntax


logger = logging.getLogger(__name__)


def _level(n):
    return (n + 1).bit_length() - 1


def _block_offset(total):
    return 0 if total == 0 else (total - 1) * 2 ** total + 1


def pair(a, b):
    """
    Bijective pairing whose bit length is close to the sum of the arguments' bit lengths.

    Pairs are grouped by the sum of the binary levels of their members.
    """
    if a < 0 or b < 0:
        raise ValueError(f'pairing is defined on natural numbers, got ({a}, {b})')
    level_a, level_b = _level(a), _level(b)
    total = level_a + level_b
    rest_a, rest_b = a + 1 - 2 ** level_a, b + 1 - 2 ** level_b
    return _block_offset(total) + level_a * 2 ** total + (rest_a << level_b) + rest_b


def unpair(n):
    """Inverse of ``pair``."""
    if n < 0:
        raise ValueError(f'unpairing is defined on natural numbers, got {n}')
    low, high = 0, n.bit_length() + 1
    while low < high:
        middle = (low + high + 1) // 2
        if _block_offset(middle) <= n:
            low = middle
        else:
            high = middle - 1
    total = low
    rest = n - _block_offset(total)
    level_a = rest >> total
    level_b = total - level_a
    inner = rest & ((1 << total) - 1)
    rest_a, rest_b = inner >> level_b, inner & ((1 << level_b) - 1)
    return 2 ** level_a - 1 + rest_a, 2 ** level_b - 1 + rest_b


_BOUNDED_KINDS = (
    (syntax.BForall, True),
    (syntax.BExists, True),
    (syntax.BForall, False),
    (syntax.BExists, False),
)


def variable_name(level):
    return f'v{level}'


@dataclasses.dataclass(frozen=True)
class GodelNumbering:
    """
    Codec between natural numbers and formulas of a relational signature.

    Args:
        signature (Signature): the signature, functional signatures are read through their graphs
        base_depth (int): number of free variables in scope at the root (0 for sentences)

    Note:
        ``decode(encode(phi))`` returns ``phi`` with its variables renamed to
        ``v0``, ``v1``, ... by binding depth; on decoded formulas both round trips are exact.
    """
    signature: syntax.Signature
    base_depth: int = 0

    def __post_init__(self):
        if not self.signature.is_relational:
            object.__setattr__(self, 'signature', self.signature.relational())

    @functools.cached_property
    def _relations(self):
        return tuple(self.signature.relations)

    @functools.cached_property
    def _ordered(self):
        return any(name == '<' and arity == 2 for name, arity in self._relations)

    def leaf_count(self, depth):
        return 2 + sum(depth ** arity for _, arity in self._relations) + depth ** 2

    def _kinds(self, depth):
        return 6 + (4 * depth if self._ordered else 0)

    # decoding

    def decode(self, n):
        if n < 0:
            raise ValueError(f'codes are natural numbers, got {n}')
        return self._decode(n, self.base_depth)

    def _decode(self, n, depth):
        leaves = self.leaf_count(depth)
        if n < leaves:
            return self._decode_leaf(n, depth)
        n -= leaves
        kinds = self._kinds(depth)
        kind, payload = n % kinds, n // kinds
        bounded = kinds - 6
        if kind == 0:
            return syntax.Not(self._decode(payload, depth))
        if kind in (1, 2):
            node = syntax.Forall if kind == 1 else syntax.Exists
            return node(variable_name(depth), self._decode(payload, depth + 1))
        if kind < 3 + bounded:
            bound_level, form = divmod(kind - 3, 4)
            node, strict = _BOUNDED_KINDS[form]
            return node(variable_name(depth), variable_name(bound_level), strict, self._decode(payload, depth + 1))
        left, right = unpair(payload)
        node = (syntax.And, syntax.Or, syntax.Implies)[kind - 3 - bounded]
        return node(self._decode(left, depth), self._decode(right, depth))

    def _decode_leaf(self, n, depth):
        if n == 0:
            return syntax.BOT
        if n == 1:
            return syntax.TOP
        n -= 2
        for name, arity in self._relations:
            count = depth ** arity
            if n < count:
                return syntax.Atom(name, _unrank_tuple(n, arity, depth))
            n -= count
        return syntax.Atom('=', _unrank_tuple(n, 2, depth))

    # encoding

    def encode(self, formula, free=None):
        """
        Return the code of ``formula``.

        Args:
            formula (Formula): a relational formula
            free (tuple): names of the variables bound at the base depth, in level order
        """
        free = tuple(sorted(formula.free_variables) if free is None else free)
        if len(free) > self.base_depth or not formula.free_variables <= set(free):
            raise ValueError(f'free variables {sorted(formula.free_variables)} do not fit depth {self.base_depth}')
        free += tuple(f'_unused{level}' for level in range(len(free), self.base_depth))
        scope = {name: level for level, name in enumerate(free)}
        return self._encode(formula, scope, self.base_depth)

    def _encode(self, formula, scope, depth):
        if isinstance(formula, syntax.Bot):
            return 0
        if isinstance(formula, syntax.Top):
            return 1
        if isinstance(formula, syntax.Atom):
            return self._encode_atom(formula, scope, depth)
        leaves, kinds = self.leaf_count(depth), self._kinds(depth)
        bounded = kinds - 6
        if isinstance(formula, syntax.Not):
            kind, payload = 0, self._encode(formula.body, scope, depth)
        elif isinstance(formula, syntax.QUANTIFIERS):
            kind = 1 if isinstance(formula, syntax.Forall) else 2
            payload = self._encode(formula.body, {**scope, formula.var: depth}, depth + 1)
        elif isinstance(formula, syntax.BOUNDED_QUANTIFIERS):
            if not self._ordered:
                raise syntax.SignatureError('bounded quantifiers need the order relation <')
            form = _BOUNDED_KINDS.index((type(formula), formula.strict))
            kind = 3 + 4 * _lookup(scope, formula.bound) + form
            payload = self._encode(formula.body, {**scope, formula.var: depth}, depth + 1)
        elif isinstance(formula, syntax.BINARY_CONNECTIVES):
            kind = 3 + bounded + syntax.BINARY_CONNECTIVES.index(type(formula))
            payload = pair(self._encode(formula.left, scope, depth), self._encode(formula.right, scope, depth))
        else:
            raise ValueError(f'cannot encode {type(formula).__name__}')
        return leaves + payload * kinds + kind

    def _encode_atom(self, atom, scope, depth):
        if not all(syntax.is_variable(arg) for arg in atom.args):
            raise ValueError(f'only relational atoms have codes, got {syntax.to_text(atom)}')
        levels = [_lookup(scope, arg) for arg in atom.args]
        offset = 2
        for name, arity in self._relations:
            if name == atom.symbol and arity == len(levels):
                return offset + _rank_tuple(levels, depth)
            offset += depth ** arity
        if atom.symbol == '=' and len(levels) == 2:
            return offset + _rank_tuple(levels, depth)
        raise syntax.SignatureError(f'unknown relation symbol {atom.symbol}/{len(levels)}')

    def sentences(self, start=0):
        """Iterate over the formulas in code order."""
        for n in itertools.count(start):
            yield self.decode(n)

    def canonical(self, formula, free=None):
        return self.decode(self.encode(formula, free))


def _lookup(scope, name):
    try:
        return scope[name]
    except KeyError:
        raise ValueError(f'variable {name} is not bound') from None


def _rank_tuple(levels, depth):
    rank = 0
    for level in levels:
        rank = rank * depth + level
    return rank


def _unrank_tuple(rank, arity, depth):
    levels = []
    for _ in range(arity):
        rank, level = divmod(rank, depth)
        levels.append(variable_name(level))
    return tuple(reversed(levels))


@functools.lru_cache(maxsize=None)
def numbering(signature, base_depth=0):
    return GodelNumbering(signature, base_depth)


def encode(formula, signature=syntax.RELATIONAL_ARITHMETIC):
    return numbering(signature).encode(formula)


def decode(n, signature=syntax.RELATIONAL_ARITHMETIC):
    return numbering(signature).decode(n)


def encode1(formula, var='v0', signature=syntax.RELATIONAL_ARITHMETIC):
    """Code of a formula with the single free variable ``var``."""
    return numbering(signature, 1).encode(formula, free=(var,))


def decode1(n, signature=syntax.RELATIONAL_ARITHMETIC):
    """Decode a formula whose free variable, if any, is ``v0``."""
    return numbering(signature, 1).decode(n)
