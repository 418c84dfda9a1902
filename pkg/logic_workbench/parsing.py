import logging

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from . import syntax


logger = logging.getLogger(__name__)

GRAMMAR = r"""
?start: formula

?formula: quantified
        | implication

quantified: "A" VAR "." formula             -> forall
          | "E" VAR "." formula             -> exists
          | "A" VAR "<" VAR "." formula     -> forall_lt
          | "A" VAR "<=" VAR "." formula    -> forall_le
          | "E" VAR "<" VAR "." formula     -> exists_lt
          | "E" VAR "<=" VAR "." formula    -> exists_le

?implication: disjunction
            | disjunction "->" implication  -> implies

?disjunction: conjunction
            | disjunction "|" conjunction   -> or_

?conjunction: unary
            | conjunction "&" unary         -> and_

?unary: "~" unary                           -> not_
      | "(" formula ")"
      | "top"                               -> top
      | "bot"                               -> bot
      | atom

?atom: term "=" term                        -> equation
     | term "<" term                        -> less
     | "S" VAR "=" VAR                      -> successor_atom
     | "A" VAR VAR VAR                      -> addition_atom
     | "M" VAR VAR VAR                      -> multiplication_atom
     | "S" "[" args "]"                     -> successor_graph
     | "A" "[" args "]"                     -> addition_graph
     | "M" "[" args "]"                     -> multiplication_graph
     | "E" "(" args ")"                     -> e_atom
     | RELNAME "(" [args] ")"               -> relation
     | RELNAME                              -> proposition

args: term ("," term)*

?term: "0"                                  -> zero
     | VAR                                  -> variable
     | "S" "(" term ")"                     -> successor
     | "(" term "+" term ")"                -> plus
     | "(" term "*" term ")"                -> times
     | RELNAME "(" [args] ")"               -> function

VAR: /[a-z_][A-Za-z0-9_]*/
RELNAME: /[A-Z][A-Za-z0-9_]*/

%import common.WS
%ignore WS
"""


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text, carrying the position of the problem."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


@v_args(inline=True)
class FormulaBuilder(Transformer):
    """Turn the parse tree into formula nodes."""
    # pylint: disable=no-self-use

    def forall(self, var, body):
        return syntax.Forall(str(var), body)

    def exists(self, var, body):
        return syntax.Exists(str(var), body)

    def forall_lt(self, var, bound, body):
        return syntax.BForall(str(var), str(bound), True, body)

    def forall_le(self, var, bound, body):
        return syntax.BForall(str(var), str(bound), False, body)

    def exists_lt(self, var, bound, body):
        return syntax.BExists(str(var), str(bound), True, body)

    def exists_le(self, var, bound, body):
        return syntax.BExists(str(var), str(bound), False, body)

    def implies(self, left, right):
        return syntax.Implies(left, right)

    def or_(self, left, right):
        return syntax.Or(left, right)

    def and_(self, left, right):
        return syntax.And(left, right)

    def not_(self, body):
        return syntax.Not(body)

    def top(self):
        return syntax.TOP

    def bot(self):
        return syntax.BOT

    def equation(self, left, right):
        return syntax.equals(left, right)

    def less(self, left, right):
        return syntax.Atom('<', (left, right))

    def successor_atom(self, arg, value):
        return syntax.Atom('S', (str(arg), str(value)))

    def addition_atom(self, left, right, value):
        return syntax.Atom('A', (str(left), str(right), str(value)))

    def multiplication_atom(self, left, right, value):
        return syntax.Atom('M', (str(left), str(right), str(value)))

    def successor_graph(self, args):
        return syntax.Atom('S', args)

    def addition_graph(self, args):
        return syntax.Atom('A', args)

    def multiplication_graph(self, args):
        return syntax.Atom('M', args)

    def e_atom(self, args):
        return syntax.Atom('E', args)

    def relation(self, name, args):
        return syntax.Atom(str(name), args or ())

    def proposition(self, name):
        return syntax.Atom(str(name), ())

    @v_args(inline=False)
    def args(self, terms):
        return tuple(terms)

    def zero(self):
        return syntax.ZERO

    def variable(self, name):
        return str(name)

    def successor(self, arg):
        return syntax.App('S', (arg,))

    def plus(self, left, right):
        return syntax.App('A', (left, right))

    def times(self, left, right):
        return syntax.App('M', (left, right))

    def function(self, name, args):
        return syntax.App(str(name), args or ())


_PARSER = Lark(GRAMMAR, parser='lalr', transformer=FormulaBuilder())


def parse(text):
    """
    Parse a formula written in the canonical syntax.

    Args:
        text (str): the formula text

    Returns:
        Formula: the parsed formula

    Raises:
        FormulaSyntaxError: with the line and column of the first problem
    """
    try:
        return _PARSER.parse(text)
    except UnexpectedInput as e:
        line, column = getattr(e, 'line', None), getattr(e, 'column', None)
        raise FormulaSyntaxError(f'cannot parse formula at line {line}, column {column}: {text!r}', line, column) from e
    except VisitError as e:
        raise FormulaSyntaxError(f'invalid formula {text!r}: {e.orig_exc}') from e
    except ValueError as e:
        raise FormulaSyntaxError(f'invalid formula {text!r}: {e}') from e


def parse_term(text):
    """Parse a single term by reading it as the left side of an equation."""
    formula = parse(f'{text} = _')
    if isinstance(formula, syntax.Atom) and formula.symbol == 'Z':
        return syntax.ZERO
    return formula.args[0]


def parse_all(texts):
    return [parse(text) for text in texts]


def print_formula(formula):
    """Canonical printing, ``parse(print_formula(f)) == f`` for parser-built formulas."""
    return syntax.to_text(formula)
