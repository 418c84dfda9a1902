"""A register machine realising Kleene application, and the Km sets built on it.

Instructions:

* ``INC r``: add one to register r
* ``DEC r t``: jump to t when register r is zero, otherwise subtract one
* ``HALVE r t``: halve register r, jump to t when the remainder was one
* ``HALT r``: stop with the content of register r

The input is placed in register 0; a run that leaves the program outputs
register 0.
"""
import enum
import logging
import math
from typing import NamedTuple, Optional

from . import limits


logger = logging.getLogger(__name__)


def cantor_pair(a, b):
    if a < 0 or b < 0:
        raise ValueError(f'pairing is defined on natural numbers, got ({a}, {b})')
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(n):
    if n < 0:
        raise ValueError(f'unpairing is defined on natural numbers, got {n}')
    total = (math.isqrt(8 * n + 1) - 1) // 2
    b = n - total * (total + 1) // 2
    return total - b, b


class Op(enum.IntEnum):
    INC = 0
    DEC = 1
    HALVE = 2
    HALT = 3


class Instruction(NamedTuple):
    op: Op
    register: int
    target: int = 0

    def __str__(self):
        if self.op in (Op.INC, Op.HALT):
            return f'{self.op.name} {self.register}'
        return f'{self.op.name} {self.register} {self.target}'


def encode_instruction(instruction):
    if instruction.op in (Op.INC, Op.HALT):
        payload = instruction.register
    else:
        payload = cantor_pair(instruction.register, instruction.target)
    return 4 * payload + instruction.op


def decode_instruction(code):
    payload, op = divmod(code, 4)
    op = Op(op)
    if op in (Op.INC, Op.HALT):
        return Instruction(op, payload)
    return Instruction(op, *cantor_unpair(payload))


def encode_program(program):
    """Bijective code of an instruction list: 0 for the empty program, else ``1 + <head, tail>``."""
    code = 0
    for instruction in reversed(program):
        code = 1 + cantor_pair(encode_instruction(instruction), code)
    return code


def decode_program(code):
    if code < 0:
        raise ValueError(f'program codes are natural numbers, got {code}')
    program = []
    while code:
        head, code = cantor_unpair(code - 1)
        program.append(decode_instruction(head))
    return tuple(program)


def parse_program(text):
    """Read one instruction per line (``INC 0``, ``DEC 1 4``...), ``#`` starts a comment."""
    program = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        name, *args = line.split()
        try:
            op = Op[name.upper()]
            values = [int(arg) for arg in args]
        except (KeyError, ValueError):
            raise ValueError(f'line {number}: cannot read instruction {line!r}') from None
        expected = 1 if op in (Op.INC, Op.HALT) else 2
        if len(values) != expected or min(values) < 0:
            raise ValueError(f'line {number}: {op.name} takes {expected} natural number argument(s)')
        program.append(Instruction(op, *values))
    return tuple(program)


def format_program(program):
    return '\n'.join(str(instruction) for instruction in program)


class RunResult(NamedTuple):
    value: Optional[int]
    steps: int
    halted: bool


def run(program, argument, fuel=None):
    """
    Run ``program`` on ``argument`` for at most ``fuel`` steps.

    Returns:
        RunResult: ``value`` is None when the fuel ran out
    """
    fuel = limits.check_bound('fuel', fuel, limits.get_fuel)
    registers = {0: argument}
    pc = 0
    for steps in range(fuel):
        if not 0 <= pc < len(program):
            return RunResult(registers.get(0, 0), steps, True)
        op, register, target = program[pc]
        value = registers.get(register, 0)
        if op == Op.INC:
            registers[register] = value + 1
            pc += 1
        elif op == Op.DEC:
            if value == 0:
                pc = target
            else:
                registers[register] = value - 1
                pc += 1
        elif op == Op.HALVE:
            registers[register], remainder = divmod(value, 2)
            pc = target if remainder else pc + 1
        else:
            return RunResult(value, steps + 1, True)
    if not 0 <= pc < len(program):
        return RunResult(registers.get(0, 0), fuel, True)
    logger.debug('run stopped after %d steps without halting', fuel)
    return RunResult(None, fuel, False)


def run_apply(x, y, fuel=None):
    """Kleene application ``x . y``: run the program coded ``x`` on ``y``, None when undefined within fuel."""
    return run(decode_program(x), y, fuel).value


def km_member(i, p, fuel=None):
    """Whether ``p = <n, x>`` is seen in Km_i within fuel, that is ``x . <n, x>`` halts with output ``i``."""
    _, x = cantor_unpair(p)
    return run_apply(x, p, fuel) == i


def _registers(program):
    return {instruction.register for instruction in program}


def _clamp_block(start, register, one):
    """Output 0 when ``register`` is zero and 1 otherwise, ``one`` is an unused register."""
    return (
        Instruction(Op.DEC, register, start + 3),
        Instruction(Op.INC, one),
        Instruction(Op.HALT, one),
        Instruction(Op.HALT, register),
    )


def clamp(program):
    """
    Compose ``program`` with a 0/1 clamp: every output becomes 0 when it is 0 and 1 otherwise.

    Halts are redirected to a clamp block reading their register; jumps out of
    the program and falling off its end reach the clamp of register 0.
    """
    end = len(program)
    registers = sorted(_registers(program) | {0})
    one, scratch = max(registers) + 1, max(registers) + 2
    starts = {register: end + 4 * i for i, register in enumerate(registers)}
    rewritten = []
    for op, register, target in program:
        if op == Op.HALT:
            rewritten.append(Instruction(Op.DEC, scratch, starts[register]))
        elif op in (Op.DEC, Op.HALVE) and target >= end:
            rewritten.append(Instruction(op, register, end))
        else:
            rewritten.append(Instruction(op, register, target))
    for register in registers:
        rewritten.extend(_clamp_block(starts[register], register, one))
    return tuple(rewritten)


# sample programs, they answer from register 1 and never scan the input

CONSTANT_ZERO = parse_program('HALT 1')

CONSTANT_ONE = parse_program('''
INC 1
HALT 1
''')

LOOP = parse_program('DEC 1 0')

EVENS = parse_program('''
HALVE 0 3   # odd inputs jump to 3
INC 1
HALT 1
HALT 1
''')

EMPTY_SET = CONSTANT_ZERO
ALL_NATURALS = CONSTANT_ONE

SAMPLE_PROGRAMS = {
    'zero': CONSTANT_ZERO,
    'one': CONSTANT_ONE,
    'loop': LOOP,
    'evens': EVENS,
    'empty': EMPTY_SET,
    'all': ALL_NATURALS,
}


class DiagonalVerdict(NamedTuple):
    """
    Outcome of the diagonal argument for one ``n``.

    ``disjunct`` is ``'Km0-W'``, ``'Km1&W'`` or None when the indicator did
    not answer 0 or 1 within fuel.
    """
    n: int
    index: int
    pair: int
    in_w: Optional[bool]
    output: Optional[int]
    disjunct: Optional[str]
    steps: int


def diagonal_verdict(indicator, n, fuel=None):
    """
    Build the index ``c`` of the clamped indicator of W and decide which of
    ``<n, c> in Km0 - W`` and ``<n, c> in Km1 & W`` holds, by replaying both runs.
    """
    c = encode_program(clamp(indicator))
    p = cantor_pair(n, c)
    direct = run(indicator, p, fuel)
    replay = run(decode_program(c), p, fuel)
    in_w = None if direct.value not in (0, 1) else direct.value == 1
    disjunct = None
    if in_w is not None and replay.value is not None:
        if replay.value == 0 and not in_w:
            disjunct = 'Km0-W'
        elif replay.value == 1 and in_w:
            disjunct = 'Km1&W'
    return DiagonalVerdict(n, c, p, in_w, replay.value, disjunct, replay.steps)


def separation_demo(indicator, ns=range(5), fuel=None):
    """The diagonal verdict for every ``n`` in ``ns``."""
    return [diagonal_verdict(indicator, n, fuel) for n in ns]


class SeparatorRefutation(NamedTuple):
    pair: int
    reason: str
    verdict: DiagonalVerdict


def refute_separator(candidate, n=0, fuel=None):
    """
    Exhibit why ``candidate`` does not separate Km0 (inside W) from Km1 (outside W).

    Returns None when the indicator does not answer within fuel.
    """
    verdict = diagonal_verdict(candidate, n, fuel)
    if verdict.disjunct == 'Km0-W':
        return SeparatorRefutation(verdict.pair, 'in Km0 but outside the candidate', verdict)
    if verdict.disjunct == 'Km1&W':
        return SeparatorRefutation(verdict.pair, 'in Km1 and inside the candidate', verdict)
    return None


def program_text_code(text):
    """Code of a program given as text."""
    return encode_program(parse_program(text))


def describe(code):
    """Instruction listing of the program coded ``code``."""
    return format_program(decode_program(code))

