"""Recursive boolean isomorphisms built by back and forth from a witness relation."""
import concurrent.futures
import dataclasses
import itertools
import logging
import re
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from . import godel
from . import limits
from . import models
from . import syntax
from . import theories


logger = logging.getLogger(__name__)

_J_ATOM = re.compile(r'J(\d+)$')


class IsoSearchError(RuntimeError):
    """Raised when a pseudo-atom partner is not found within the iso budget."""


def is_pseudo_atom(formula):
    """Atomic, or a quantifier as main connective."""
    return isinstance(formula, (syntax.Atom,) + syntax.QUANTIFIERS + syntax.BOUNDED_QUANTIFIERS)


def _boolean_parts(formula):
    if isinstance(formula, syntax.Not):
        return (formula.body,)
    if isinstance(formula, syntax.BINARY_CONNECTIVES):
        return (formula.left, formula.right)
    return ()


def _boolean_rebuild(formula, parts):
    if isinstance(formula, syntax.Not):
        return syntax.Not(parts[0])
    if isinstance(formula, syntax.BINARY_CONNECTIVES):
        return type(formula)(*parts)
    return formula


class TheoryOracle:
    """
    A decidable theory with a bijective sentence enumeration.

    Subclasses provide ``proves``, ``sentence`` and ``code``; codes of boolean
    compounds must exceed the codes of their parts.
    """
    name = 'theory'
    signature = None

    def proves(self, sentence):
        raise NotImplementedError

    def sentence(self, n):
        raise NotImplementedError

    def code(self, sentence):
        raise NotImplementedError

    def equivalent(self, left, right):
        return self.proves(syntax.iff(left, right))

    def sentences(self, start=0):
        for n in itertools.count(start):
            yield self.sentence(n)


class ModelTheoryOracle(TheoryOracle):
    """The complete theory of a finite structure, decided by evaluation."""

    def __init__(self, structure, name=None):
        self.structure = structure
        self.name = name or structure.name or 'Th(M)'
        self.signature = structure.signature
        self.numbering = godel.numbering(structure.signature)
        self._evaluator = models.Evaluator(structure)
        self._truth = {}

    def proves(self, sentence):
        key = syntax.to_text(sentence)
        if key not in self._truth:
            self._truth[key] = self._evaluator.satisfies(sentence)
        return self._truth[key]

    def sentence(self, n):
        return self.numbering.decode(n)

    def code(self, sentence):
        return self.numbering.encode(sentence)


@dataclasses.dataclass(frozen=True)
class JpropSignature(syntax.Signature):
    """The relations of a signature together with every zero-ary atom ``J<n>``."""

    def relation_arity(self, symbol):
        if _J_ATOM.match(symbol):
            return 0
        return super().relation_arity(symbol)


JPROP = JpropSignature(relations=syntax.JAN.relations)


def j_atom(n):
    """The zero-ary atom standing for ``A_n``."""
    return syntax.Atom(f'J{n}', ())


def j_index(formula):
    match = isinstance(formula, syntax.Atom) and not formula.args and _J_ATOM.match(formula.symbol)
    return int(match.group(1)) if match else None


class JpropOracle(TheoryOracle):
    """
    The boolean fragment of jprop(U) over the atoms ``J<n>`` (``A`` of the U-sentence coded n).

    jprop(U) proves a boolean combination of such atoms exactly when U proves
    the same combination of the coded sentences, so queries are answered by
    the base oracle.
    """
    _KINDS = 5

    def __init__(self, base):
        self.base = base
        self.name = f'jprop({base.name})'
        self.signature = JPROP

    def unfold(self, sentence):
        """Replace every ``J<n>`` by the base sentence coded ``n``."""
        def replace(atom):
            index = j_index(atom)
            if index is None:
                raise syntax.SignatureError(f'{syntax.to_text(atom)} is outside the jprop fragment')
            return self.base.sentence(index)
        return syntax.replace_atoms(sentence, replace)

    def proves(self, sentence):
        return self.base.proves(self.unfold(sentence))

    def sentence(self, n):
        if n < 2:
            return (syntax.BOT, syntax.TOP)[n]
        kind, payload = (n - 2) % self._KINDS, (n - 2) // self._KINDS
        if kind == 0:
            return j_atom(payload)
        if kind == 1:
            return syntax.Not(self.sentence(payload))
        left, right = godel.unpair(payload)
        node = (syntax.And, syntax.Or, syntax.Implies)[kind - 2]
        return node(self.sentence(left), self.sentence(right))

    def code(self, sentence):
        if isinstance(sentence, syntax.Bot):
            return 0
        if isinstance(sentence, syntax.Top):
            return 1
        index = j_index(sentence)
        if index is not None:
            return 2 + self._KINDS * index
        if isinstance(sentence, syntax.Not):
            return 2 + self._KINDS * self.code(sentence.body) + 1
        if isinstance(sentence, syntax.BINARY_CONNECTIVES):
            kind = 2 + syntax.BINARY_CONNECTIVES.index(type(sentence))
            payload = godel.pair(self.code(sentence.left), self.code(sentence.right))
            return 2 + self._KINDS * payload + kind
        raise syntax.SignatureError(f'{syntax.to_text(sentence)} is outside the jprop fragment')


@dataclasses.dataclass(frozen=True)
class WitnessRelation:
    """
    An enumerable relation between the sentences of two theories.

    Args:
        name (str): label used in reports
        related (callable): decides ``phi E phi'``
        image (callable): some ``chi'`` with ``phi ~ chi E chi'``, None when not found
        preimage (callable): some ``chi`` with ``chi E chi' ~' phi'``, None when not found
    """
    name: str
    related: Callable[[syntax.Formula, syntax.Formula], bool]
    image: Callable[[syntax.Formula], Optional[syntax.Formula]]
    preimage: Callable[[syntax.Formula], Optional[syntax.Formula]]


def truth_matching_relation(left, right):
    """Relate sentences of two complete theories with the same truth value."""
    def image(sentence):
        return syntax.TOP if left.proves(sentence) else syntax.BOT

    def preimage(sentence):
        return syntax.TOP if right.proves(sentence) else syntax.BOT

    return WitnessRelation(
        f'truth({left.name}, {right.name})',
        related=lambda phi, phi_prime: left.proves(phi) == right.proves(phi_prime),
        image=image,
        preimage=preimage,
    )


def jprop_relation(base, fragment):
    """``phi E phi'`` iff ``phi'`` is the atom ``A_phi``."""
    return WitnessRelation(
        f'jprop({base.name})',
        related=lambda phi, phi_prime: phi_prime == j_atom(base.code(phi)),
        image=lambda phi: j_atom(base.code(phi)),
        preimage=fragment.unfold,
    )


def jprop(base, bound=None):
    """
    The axioms of jprop(U) and its witness relation ``{(phi, A_phi)}``.

    The stream interleaves the Jan axioms with, for each U-sentence in code
    order, its linking biconditional (for boolean compounds and constants) and
    ``A_phi`` when U proves it.
    """
    bound = limits.check_bound('scheme bound', bound, limits.get_scheme_bound)
    fragment = JpropOracle(base)
    jan = theories.axioms('Jan', bound)

    def linked():
        for n in itertools.count():
            sentence = base.sentence(n)
            if not is_pseudo_atom(sentence):
                parts = [j_atom(base.code(part)) for part in _boolean_parts(sentence)]
                yield syntax.iff(j_atom(n), _boolean_rebuild(sentence, parts))
            if base.proves(sentence):
                yield j_atom(n)

    def generate():
        for jan_axiom, link in zip(itertools.chain(jan, itertools.repeat(None)), linked()):
            if jan_axiom is not None:
                yield jan_axiom
            yield link

    stream = theories.AxiomStream(fragment.name, fragment.signature, generate, bound)
    return stream, jprop_relation(base, fragment), fragment


class ConditionResult(NamedTuple):
    condition: str
    passed: bool
    inconclusive: bool
    counterexample: Optional[Tuple[str, ...]]
    checked: int


def _index_pairs(sample):
    return [godel.unpair(t) for t in range(sample)]


def _check_left_total(relation, left, right, sample):
    inconclusive = False
    for n in range(sample):
        phi = left.sentence(n)
        image = relation.image(phi)
        if image is None:
            inconclusive = True
        elif not relation.related(phi, image):
            return False, inconclusive, (syntax.to_text(phi),)
    return True, inconclusive, None


def _check_right_total(relation, left, right, sample):
    inconclusive = False
    for n in range(sample):
        phi_prime = right.sentence(n)
        source = relation.preimage(phi_prime)
        if source is None:
            inconclusive = True
            continue
        image = relation.image(source)
        if image is None:
            inconclusive = True
        elif not right.equivalent(image, phi_prime):
            return False, inconclusive, (syntax.to_text(phi_prime), syntax.to_text(source))
    return True, inconclusive, None


def _check_equivalence(relation, left, right, sample):
    inconclusive = False
    for i, j in _index_pairs(sample):
        phi0, phi1 = left.sentence(i), left.sentence(j)
        image0, image1 = relation.image(phi0), relation.image(phi1)
        if image0 is None or image1 is None:
            inconclusive = True
            continue
        if left.equivalent(phi0, phi1) != right.equivalent(image0, image1):
            return False, inconclusive, tuple(syntax.to_text(s) for s in (phi0, image0, phi1, image1))
    return True, inconclusive, None


def _check_connectives(relation, left, right, sample):
    inconclusive = False
    for i, j in _index_pairs(sample):
        phi, psi = left.sentence(i), left.sentence(j)
        images = relation.image(phi), relation.image(psi)
        if None in images:
            inconclusive = True
            continue
        compounds = [(syntax.Not(phi), syntax.Not(images[0]))]
        compounds += [(node(phi, psi), node(*images)) for node in syntax.BINARY_CONNECTIVES]
        for chi, expected in compounds:
            chi_image = relation.image(chi)
            if chi_image is None:
                inconclusive = True
            elif not right.equivalent(chi_image, expected):
                return False, inconclusive, (syntax.to_text(chi), syntax.to_text(chi_image))
    return True, inconclusive, None


_CONDITIONS = (
    ('left totality', _check_left_total),
    ('right totality', _check_right_total),
    ('equivalence transfer', _check_equivalence),
    ('connectives', _check_connectives),
)


def verify_witness(relation, left, right, sample=200):
    """
    Check the four witnessing conditions on the first ``sample`` codes and index pairs.

    Returns:
        list of ConditionResult, in the order left totality, right totality,
        equivalence transfer, connectives
    """
    def run(entry):
        condition, check = entry
        passed, inconclusive, counterexample = check(relation, left, right, sample)
        logger.debug('%s on %s: passed=%s', condition, relation.name, passed)
        return ConditionResult(condition, passed, inconclusive and passed, counterexample, sample)

    workers = limits.get_workers()
    if workers == 1:
        return [run(entry) for entry in _CONDITIONS]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(run, _CONDITIONS))


@dataclasses.dataclass
class IsoState:
    """
    Pairs ``(phi_i, phi'_i)`` listed by the back and forth construction, stored as codes.
    """
    relation: WitnessRelation
    left: TheoryOracle
    right: TheoryOracle
    pairs: List[Tuple[int, int]] = dataclasses.field(default_factory=list)
    forward: Dict[int, int] = dataclasses.field(default_factory=dict)
    backward: Dict[int, int] = dataclasses.field(default_factory=dict)
    budget: int = 0
    _next_left: int = dataclasses.field(default=0, init=False)
    _next_right: int = dataclasses.field(default=0, init=False)

    @property
    def steps(self):
        return len(self.pairs)

    def sentence_pairs(self):
        return [(self.left.sentence(a), self.right.sentence(b)) for a, b in self.pairs]

    def _add(self, left_code, right_code):
        self.pairs.append((left_code, right_code))
        self.forward[left_code] = right_code
        self.backward[right_code] = left_code

    def step(self):
        if self.steps % 2 == 0:
            self._extend(self.left, self.right, self.forward, forth=True)
        else:
            self._extend(self.right, self.left, self.backward, forth=False)

    def _extend(self, source, target, listed, forth):
        attribute = '_next_left' if forth else '_next_right'
        code = getattr(self, attribute)
        while code in listed:
            code += 1
        setattr(self, attribute, code + 1)
        sentence = source.sentence(code)
        if is_pseudo_atom(sentence):
            partner = self._partner(sentence, target, forth)
        else:
            parts = [target.sentence(listed[source.code(part)]) for part in _boolean_parts(sentence)]
            partner = target.code(_boolean_rebuild(sentence, parts))
        if forth:
            self._add(code, partner)
        else:
            self._add(partner, code)

    def _partner(self, sentence, target, forth):
        """First unlisted pseudo-atom of ``target`` related to ``sentence`` up to equivalence."""
        representative = self.relation.image(sentence) if forth else self.relation.preimage(sentence)
        if representative is None:
            raise IsoSearchError(f'no related sentence found for {syntax.to_text(sentence)}')
        taken = self.backward if forth else self.forward
        for candidate_code in range(self.budget):
            if candidate_code in taken:
                continue
            candidate = target.sentence(candidate_code)
            if is_pseudo_atom(candidate) and target.equivalent(representative, candidate):
                return candidate_code
        raise IsoSearchError(
            f'no pseudo-atom partner for {syntax.to_text(sentence)} among the first {self.budget} codes'
        )

    def apply(self, sentence):
        """Image of ``sentence``, extended through boolean connectives from the listed pairs."""
        return self._map(sentence, self.left, self.right, self.forward)

    def invert(self, sentence):
        return self._map(sentence, self.right, self.left, self.backward)

    def _map(self, sentence, source, target, listed):
        code = source.code(sentence)
        if code in listed:
            return target.sentence(listed[code])
        if is_pseudo_atom(sentence):
            raise IsoSearchError(f'{syntax.to_text(sentence)} is not listed yet')
        parts = [self._map(part, source, target, listed) for part in _boolean_parts(sentence)]
        return _boolean_rebuild(sentence, parts)


def build_iso(relation, left, right, steps, budget=None):
    """
    Run ``steps`` back and forth steps: even steps list the first unlisted
    left sentence, odd steps the first unlisted right sentence.

    Raises:
        IsoSearchError: when a pseudo-atom partner is not found within the budget
    """
    budget = limits.check_bound('iso budget', budget, limits.get_iso_budget)
    state = IsoState(relation, left, right, budget=budget)
    for _ in range(steps):
        state.step()
    logger.debug('listed %d pairs between %s and %s', state.steps, left.name, right.name)
    return state


def check_iso(state):
    """
    Return the problems found on the listed pairs: provability transfer,
    injectivity and structural commutation.
    """
    problems = []
    if len(state.forward) != state.steps or len(state.backward) != state.steps:
        problems.append('the listed map is not injective')
    for left_code, right_code in state.pairs:
        phi, phi_prime = state.left.sentence(left_code), state.right.sentence(right_code)
        if state.left.proves(phi) != state.right.proves(phi_prime):
            problems.append(f'provability differs on {syntax.to_text(phi)} / {syntax.to_text(phi_prime)}')
        structural = _boolean_rebuild(phi, [state.apply(part) for part in _boolean_parts(phi)])
        if not is_pseudo_atom(phi) and structural != phi_prime:
            problems.append(f'{syntax.to_text(phi)} is not mapped structurally')
        if is_pseudo_atom(phi) != is_pseudo_atom(phi_prime):
            problems.append(f'{syntax.to_text(phi)} and {syntax.to_text(phi_prime)} differ in kind')
    return problems


def extension_proves(oracle, added, sentence):
    """Whether the oracle's theory plus the finitely many ``added`` sentences proves ``sentence``."""
    return oracle.proves(syntax.Implies(syntax.conjunction(added), sentence))


def image_theory_proves(state, added, sentence):
    """Whether the image of the extension by ``added`` proves the image of ``sentence``."""
    images = [state.apply(phi) for phi in added]
    return extension_proves(state.right, images, state.apply(sentence))
