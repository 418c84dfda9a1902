import contextlib
import io

from hypothesis import settings, strategies as st

from logic_workbench import cli
from logic_workbench import syntax


# no deadline, evaluation time varies with the drawn formula
fast_settings = settings(deadline=None, max_examples=25)

VARIABLES = ('x', 'y', 'z')
PURE_RELATIONS = (('<', 2), ('=', 2), ('Z', 1), ('S', 2), ('A', 3), ('M', 3))


@st.composite
def pure_atoms(draw, variables=VARIABLES):
    symbol, arity = draw(st.sampled_from(PURE_RELATIONS))
    return syntax.Atom(symbol, tuple(draw(st.sampled_from(variables)) for _ in range(arity)))


@st.composite
def bounded_quantifiers(draw, bodies, variables=VARIABLES):
    var, bound = draw(st.sampled_from([(a, b) for a in variables for b in variables if a != b]))
    kind = draw(st.sampled_from(syntax.BOUNDED_QUANTIFIERS))
    return kind(var, bound, draw(st.booleans()), draw(bodies))


def pure_formulas(variables=VARIABLES, max_leaves=6):
    """Pure Delta0 formulas over ``variables``."""
    leaves = st.one_of(pure_atoms(variables), st.just(syntax.TOP), st.just(syntax.BOT))

    def extend(children):
        return st.one_of(
            st.builds(syntax.Not, children),
            st.builds(syntax.And, children, children),
            st.builds(syntax.Or, children, children),
            st.builds(syntax.Implies, children, children),
            bounded_quantifiers(children, variables),
        )
    return st.recursive(leaves, extend, max_leaves=max_leaves)


def closed_formulas(max_leaves=5):
    """Sentences over the order, obtained by closing pure formulas universally or existentially."""
    return st.builds(
        lambda formula, universal: (syntax.universal_closure(formula) if universal
                                    else syntax.exists_block(sorted(formula.free_variables), formula)),
        pure_formulas(max_leaves=max_leaves),
        st.booleans(),
    )


def run_cli(*argv):
    """Run the command line, returning ``(status, stdout, stderr)``; argparse exits are caught."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            status = cli.main(list(argv))
        except SystemExit as e:
            status = e.code
    return status, out.getvalue(), err.getvalue()
