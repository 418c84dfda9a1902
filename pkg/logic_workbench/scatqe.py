"""Quantifier elimination for the scattered model, relative to a variable equivalence.

A friendly formula is a boolean combination of ``Good(anchor, chi)`` leaves,
each standing for ``chi`` relativised to the class of ``anchor``. Class
counting makes the elimination depend on which class sizes exist: the result
is exact for the scattered model cut at the elimination bound, and a
``Beyond`` node records the full-model form when it differs (or that it is
unknown).
"""
import dataclasses
import functools
import itertools
import logging
from typing import NamedTuple, Optional, Tuple

from . import limits
from . import models
from . import syntax
from . import translations


logger = logging.getLogger(__name__)

_SCAT_ARITIES = {'S': 2, 'A': 3, 'M': 3, '<': 2, '=': 2}
# from this class size on, a single element realises the same quantifier free types
QF_STABLE_SIZE = 4


class NotFriendlyError(ValueError):
    """Raised by the friendliness certifier."""


@dataclasses.dataclass(frozen=True)
class Good(syntax.Formula):
    """``chi`` relativised to the class of ``anchor``."""
    anchor: str
    chi: syntax.Formula

    def _free_variables(self):
        return self.chi.free_variables | {self.anchor}

    def _variables(self):
        return self.chi.variables | {self.anchor}

    @functools.cached_property
    def relativized(self):
        return translations.relativize_to_class(self.chi, self.anchor)

    def render(self):
        return self.relativized

    def evaluate_with(self, evaluator, env):
        return evaluator.evaluate(self.relativized, {var: env[var] for var in self.relativized.free_variables})


@dataclasses.dataclass(frozen=True)
class Beyond(syntax.Formula):
    """``bounded`` holds in the cut scattered model, ``full`` (None when unknown) in the whole one."""
    bounded: syntax.Formula
    full: Optional[syntax.Formula] = None

    def _free_variables(self):
        extra = self.full.free_variables if self.full is not None else frozenset()
        return self.bounded.free_variables | extra

    def _variables(self):
        return self._free_variables()

    def render(self):
        return self.bounded

    def evaluate_with(self, evaluator, env):
        return evaluator.evaluate(self.bounded, {var: env[var] for var in self.bounded.free_variables})


@dataclasses.dataclass(frozen=True)
class VarEquivalence:
    """
    An equivalence relation on an ordered finite set of variables.

    Args:
        order (tuple): the variables, in the enumeration order used for anchor choices
        blocks (tuple): the equivalence classes, as tuples following ``order``
    """
    order: Tuple[str, ...]
    blocks: Tuple[Tuple[str, ...], ...]

    def __post_init__(self):
        seen = [var for block in self.blocks for var in block]
        if sorted(seen) != sorted(self.order) or len(set(seen)) != len(seen):
            raise ValueError(f'classes {self.blocks} do not partition {self.order}')

    @classmethod
    def from_classes(cls, classes, order=None):
        classes = [tuple(block) for block in classes if block]
        order = tuple(order or [var for block in classes for var in block])
        position = {var: i for i, var in enumerate(order)}
        blocks = sorted((tuple(sorted(block, key=position.__getitem__)) for block in classes),
                        key=lambda block: position[block[0]])
        return cls(order, tuple(blocks))

    @classmethod
    def parse(cls, text):
        """Read ``"x=y;z"``: classes separated by ``;``, members by ``=``."""
        classes = [[var.strip() for var in part.split('=') if var.strip()] for part in text.split(';')]
        return cls.from_classes([block for block in classes if block])

    @classmethod
    def empty(cls):
        return cls((), ())

    def block_of(self, var):
        for block in self.blocks:
            if var in block:
                return block
        raise KeyError(var)

    def representative(self, var):
        return self.block_of(var)[0]

    def equivalent(self, left, right):
        return right in self.block_of(left)

    def extensions(self, var):
        """Every equivalence on ``order + (var,)`` restricting to this one."""
        order = self.order + (var,)
        joined = [
            VarEquivalence(order, tuple(block + (var,) if i == j else block for j, block in enumerate(self.blocks)))
            for i in range(len(self.blocks))
        ]
        return joined + [VarEquivalence(order, self.blocks + ((var,),))]

    def guard_formula(self):
        """E: ``x ~ y`` for equivalent pairs and ``~x ~ y`` for the others."""
        parts = []
        for left, right in itertools.combinations(self.order, 2):
            together = same_class(left, right)
            parts.append(together if self.equivalent(left, right) else syntax.Not(together))
        return syntax.conjunction(parts)

    def __str__(self):
        return ';'.join('='.join(block) for block in self.blocks)


def same_class(left, right):
    """``left < right | right <= left``"""
    return syntax.Or(syntax.Atom('<', (left, right)), syntax.less_equal(right, left))


def all_equivalences(variables):
    """Every equivalence relation on ``variables``, as ``VarEquivalence`` values."""
    variables = tuple(variables)

    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for partition in partitions(rest):
            for i in range(len(partition)):
                yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
            yield [[first]] + partition
    return [VarEquivalence.from_classes(partition, variables) for partition in partitions(list(variables))]


def c_formula(n, u='u'):
    """The class of ``u`` has exactly ``n`` elements, once relativised to that class."""
    if n < 1:
        raise ValueError(f'class sizes start at 1, got {n}')
    names = syntax.FreshNames({u})
    others = [names('v') for _ in range(n - 1)]
    members = [u] + others
    everyone = names('w')
    distinct = [syntax.Not(syntax.Atom('=', (a, b))) for a, b in itertools.combinations(members, 2)]
    covered = syntax.Forall(everyone, syntax.disjunction(syntax.Atom('=', (everyone, m)) for m in members))
    return syntax.exists_block(others, syntax.conjunction(distinct + [covered]))


class ClassSatProfile(NamedTuple):
    """The class sizes up to ``bound`` whose class model satisfies ``E var. chi``."""
    chi: syntax.Formula
    hits: Tuple[int, ...]
    bound: int
    saturated: bool
    closed: bool


@functools.lru_cache(maxsize=None)
def _class_model(n):
    return models.class_model(n)


@functools.lru_cache(maxsize=8192)
def class_satisfiable(chi, var, n):
    return models.satisfies(_class_model(n), syntax.Exists(var, chi))


def _is_quantifier_free(formula):
    kinds = syntax.QUANTIFIERS + syntax.BOUNDED_QUANTIFIERS
    return not any(isinstance(node, kinds) for node in syntax.iter_nodes(formula))


def class_profile(chi, var, bound, threshold):
    """
    Sizes of the classes in which ``chi`` can be fulfilled, searched up to ``bound``.

    The profile is saturated once more than ``threshold`` sizes are found, and
    closed when ``chi`` is quantifier free and the bound reaches the size from
    which one-element types stabilise.
    """
    hits = []
    for n in range(1, bound + 1):
        if class_satisfiable(chi, var, n):
            hits.append(n)
            if len(hits) > threshold:
                break
    return ClassSatProfile(
        chi, tuple(hits), bound, saturated=len(hits) > threshold,
        closed=_is_quantifier_free(chi) and bound >= QF_STABLE_SIZE,
    )


def unbound(formula):
    """Rewrite bounded quantifiers as guarded unbounded ones."""
    if isinstance(formula, (syntax.Atom, syntax.Bot, syntax.Top)):
        return formula
    if isinstance(formula, syntax.Not):
        return syntax.Not(unbound(formula.body))
    if isinstance(formula, syntax.BINARY_CONNECTIVES):
        return type(formula)(unbound(formula.left), unbound(formula.right))
    body = unbound(formula.body)
    if isinstance(formula, syntax.QUANTIFIERS):
        return type(formula)(formula.var, body)
    order = syntax.Atom('<', (formula.var, formula.bound))
    if not formula.strict:
        order = syntax.Or(order, syntax.Atom('=', (formula.var, formula.bound)))
    if isinstance(formula, syntax.BForall):
        return syntax.Forall(formula.var, syntax.Implies(order, body))
    return syntax.Exists(formula.var, syntax.And(order, body))


# Kleene combinations of formulas, None is unknown

def _or_all(parts):
    parts = list(parts)
    if any(isinstance(part, syntax.Top) for part in parts):
        return syntax.TOP
    if any(part is None for part in parts):
        return None
    return syntax.smart_disjunction(parts)


def _and_all(parts):
    parts = list(parts)
    if any(isinstance(part, syntax.Bot) for part in parts):
        return syntax.BOT
    if any(part is None for part in parts):
        return None
    return syntax.smart_conjunction(parts)


def _dnf(node, positive=True):
    """Terms (tuples of ``Good`` literals) of a disjunctive normal form of a friendly formula."""
    if isinstance(node, syntax.Top):
        return [()] if positive else []
    if isinstance(node, syntax.Bot):
        return [] if positive else [()]
    if isinstance(node, Good):
        return [(node if positive else Good(node.anchor, syntax.smart_not(node.chi)),)]
    if isinstance(node, syntax.Not):
        return _dnf(node.body, not positive)
    if isinstance(node, syntax.Implies):
        left, right = _dnf(node.left, not positive), _dnf(node.right, positive)
        return left + right if positive else [a + b for a in left for b in right]
    if isinstance(node, (syntax.And, syntax.Or)):
        left, right = _dnf(node.left, positive), _dnf(node.right, positive)
        if isinstance(node, syntax.And) == positive:
            return [a + b for a in left for b in right]
        return left + right
    raise NotFriendlyError(f'unexpected {type(node).__name__} in a friendly formula')


def _chi_key(chi):
    return syntax.to_text(chi)


class QuantifierEliminator:
    """
    Rewrite formulas of the scattered signature into friendly form.

    Args:
        bound (int): largest class size examined by profiles, the cut of the bounded model
    """

    def __init__(self, bound=None):
        self.bound = limits.check_bound('qe bound', bound, limits.get_qe_bound)
        self._memo = {}

    def eliminate(self, formula, equiv):
        """
        Return a friendly formula equivalent to ``formula`` under the guard of ``equiv``.

        Raises:
            ValueError: when a free variable of ``formula`` is outside ``equiv``
            SignatureError: for atoms outside the scattered signature
        """
        missing = formula.free_variables - set(equiv.order)
        if missing:
            raise ValueError(f'free variables {sorted(missing)} are not in the equivalence')
        bounded, full = self._pair(unbound(formula), equiv)
        if bounded == full:
            return bounded
        return Beyond(bounded, full)

    def _pair(self, node, equiv):
        key = (node, equiv)
        if key not in self._memo:
            self._memo[key] = self._compute(node, equiv)
        return self._memo[key]

    def _compute(self, node, equiv):
        if isinstance(node, (syntax.Top, syntax.Bot)):
            return node, node
        if isinstance(node, syntax.Atom):
            leaf = self._atom(node, equiv)
            return leaf, leaf
        if isinstance(node, syntax.Not):
            bounded, full = self._pair(node.body, equiv)
            return syntax.smart_not(bounded), None if full is None else syntax.smart_not(full)
        if isinstance(node, syntax.Implies):
            return self._pair(syntax.Or(syntax.Not(node.left), node.right), equiv)
        if isinstance(node, (syntax.And, syntax.Or)):
            (left_b, left_f), (right_b, right_f) = self._pair(node.left, equiv), self._pair(node.right, equiv)
            if isinstance(node, syntax.And):
                return syntax.smart_and(left_b, right_b), _and_all([left_f, right_f])
            return syntax.smart_or(left_b, right_b), _or_all([left_f, right_f])
        if isinstance(node, syntax.Forall):
            return self._pair(syntax.Not(syntax.Exists(node.var, syntax.Not(node.body))), equiv)
        if isinstance(node, syntax.Exists):
            return self._exists(node, equiv)
        raise NotFriendlyError(f'cannot eliminate {type(node).__name__}')

    def _atom(self, atom, equiv):
        if _SCAT_ARITIES.get(atom.symbol) != len(atom.args):
            raise syntax.SignatureError(f'{atom.symbol}/{len(atom.args)} is not in the scattered signature')
        if not all(syntax.is_variable(arg) for arg in atom.args):
            raise syntax.SignatureError(f'the scattered signature is relational, got {syntax.to_text(atom)}')
        anchors = {equiv.representative(arg) for arg in atom.args}
        if len(anchors) > 1:
            return syntax.BOT
        return Good(anchors.pop(), atom)

    def _exists(self, node, equiv):
        var, body = node.var, node.body
        if var in equiv.order:
            fresh = syntax.fresh_variable(var, set(equiv.order) | body.variables)
            body, var = syntax.substitute(body, {var: fresh}), fresh
        bounded_parts, full_parts = [], []
        for extension in equiv.extensions(var):
            bounded, full = self._pair(body, extension)
            bounded_parts.append(self._project(var, bounded, extension, equiv, full_world=False))
            full_parts.append(None if full is None else self._project(var, full, extension, equiv, full_world=True))
        logger.debug('eliminated E %s over %d refinements of %s', var, len(bounded_parts), equiv)
        return syntax.smart_disjunction(bounded_parts), _or_all(full_parts)

    def _project(self, var, friendly, extension, equiv, full_world):
        """``E var. (E_extension & friendly)`` as a friendly formula for ``equiv``."""
        home = extension.block_of(var)
        results = []
        for term in _dnf(friendly):
            groups = {}
            for leaf in term:
                groups.setdefault(extension.representative(leaf.anchor), []).append(leaf.chi)
            outside, inside = [], syntax.TOP
            for anchor, chis in groups.items():
                chi = syntax.smart_conjunction(sorted(set(chis), key=_chi_key))
                if anchor in home:
                    inside = chi
                else:
                    outside.append(Good(equiv.representative(anchor), chi))
            if len(home) > 1:
                witness = next(other for other in home if other != var)
                found = syntax.TOP if isinstance(inside, syntax.Top) else Good(witness, syntax.Exists(var, inside))
            else:
                found = self._count(var, inside, equiv, full_world)
            results.append(_and_all(outside + [found]))
        return _or_all(results)

    def _count(self, var, chi, equiv, full_world):
        if isinstance(chi, syntax.Bot):
            return syntax.BOT
        profile = class_profile(chi, var, self.bound, threshold=len(equiv.order))
        if profile.saturated:
            return syntax.TOP
        bounded = counting_formula(profile.hits, equiv.order)
        if not full_world:
            return bounded
        if profile.closed:
            return syntax.TOP if class_satisfiable(chi, var, QF_STABLE_SIZE) else bounded
        return None


def counting_formula(sizes, anchors):
    """Some class of a size in ``sizes`` holds none of ``anchors``."""
    return syntax.smart_disjunction(
        syntax.smart_conjunction(Good(x, syntax.Not(c_formula(n, x))) for x in anchors) for n in sizes
    )


def qe(formula, equiv, bound=None):
    """Friendly equivalent of ``formula`` under the guard of ``equiv``, see ``QuantifierEliminator``."""
    return QuantifierEliminator(bound).eliminate(formula, equiv)


class FriendlyCertificate(NamedTuple):
    leaves: int
    anchors: Tuple[str, ...]


def certify_friendly(formula, equiv):
    """
    Check that ``formula`` is a boolean combination of good leaves for ``equiv``.

    Raises:
        NotFriendlyError: naming the first offending node
    """
    anchors = []

    def check(node):
        if isinstance(node, (syntax.Top, syntax.Bot)):
            return
        if isinstance(node, Good):
            if node.anchor not in equiv.order:
                raise NotFriendlyError(f'anchor {node.anchor} is not a variable of the equivalence')
            stray = node.chi.free_variables - set(equiv.block_of(node.anchor))
            if stray:
                raise NotFriendlyError(f'{sorted(stray)} are not equivalent to the anchor {node.anchor}')
            for inner in syntax.iter_nodes(node.chi):
                if isinstance(inner, (Good, Beyond)):
                    raise NotFriendlyError('good leaves cannot be nested')
            anchors.append(node.anchor)
            return
        if isinstance(node, Beyond):
            check(node.bounded)
            if node.full is not None:
                check(node.full)
            return
        if isinstance(node, syntax.Not):
            check(node.body)
            return
        if isinstance(node, syntax.BINARY_CONNECTIVES):
            check(node.left)
            check(node.right)
            return
        raise NotFriendlyError(f'{type(node).__name__} is not a boolean combination of good formulas')

    check(formula)
    return FriendlyCertificate(len(anchors), tuple(dict.fromkeys(anchors)))


def full_form(friendly):
    """The full-model form of a friendly formula, None when unknown."""
    return friendly.full if isinstance(friendly, Beyond) else friendly


def decide_sentence(sentence, bound=None):
    """
    Decide a sentence in the scattered model: True, False, or None when the
    class profiles up to ``bound`` do not settle it.
    """
    if sentence.free_variables:
        raise ValueError(f'expected a sentence, {sorted(sentence.free_variables)} are free')
    full = full_form(qe(sentence, VarEquivalence.empty(), bound))
    if full is None:
        return None
    if isinstance(full, syntax.Top):
        return True
    if isinstance(full, syntax.Bot):
        return False
    raise RuntimeError(f'closed friendly formula did not reduce: {friendly_text(full)}')


def friendly_text(formula):
    """Compact text of a friendly formula: ``[x| chi]`` for good leaves."""
    if isinstance(formula, Good):
        return f'[{formula.anchor}| {syntax.to_text(formula.chi)}]'
    if isinstance(formula, Beyond):
        full = '?' if formula.full is None else friendly_text(formula.full)
        return f'beyond({friendly_text(formula.bounded)}; {full})'
    if isinstance(formula, syntax.Not):
        return f'~{friendly_text(formula.body)}'
    if isinstance(formula, syntax.BINARY_CONNECTIVES):
        symbol = {syntax.And: '&', syntax.Or: '|', syntax.Implies: '->'}[type(formula)]
        return f'({friendly_text(formula.left)} {symbol} {friendly_text(formula.right)})'
    return syntax.to_text(formula)
