from .diagonal import fixed_point, rosser_rho, sub
from .godel import decode, encode
from .lindenbaum import build_iso, jprop, verify_witness
from .models import build_model, enumerate_models, evaluate
from .parsing import parse, print_formula
from .recursion import km_member, run_apply, separation_demo
from .scatqe import c_formula, decide_sentence, qe
from .syntax import purify
from .theories import axioms, combine
from .translations import apply, internal_model, ortho, sigma_q, witness_compare

__ALL__ = [
    'apply',
    'axioms',
    'build_iso',
    'build_model',
    'c_formula',
    'combine',
    'decide_sentence',
    'decode',
    'encode',
    'enumerate_models',
    'evaluate',
    'fixed_point',
    'internal_model',
    'jprop',
    'km_member',
    'ortho',
    'parse',
    'print_formula',
    'purify',
    'qe',
    'rosser_rho',
    'run_apply',
    'separation_demo',
    'sigma_q',
    'sub',
    'verify_witness',
    'witness_compare',
]
