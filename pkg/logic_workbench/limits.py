import logging
import os


logger = logging.getLogger(__name__)

WORKERS_ENV_VAR = 'LOGIC_WORKBENCH_WORKERS'


def _bound_helper(name, default, ceiling):
    """
        Build a getter/setter pair for one configurable bound.

        args:
            name (str): the name used in error messages
            default (int): the initial value
            ceiling (int): the hard ceiling, setting a larger value raises
    """
    def get():
        return get.value

    def set_(value):
        if not isinstance(value, int) or value < 0:
            raise ValueError(f'{name} must be a non negative integer, got {value!r}')
        if value > ceiling:
            raise ValueError(f'{name} {value} exceeds its ceiling {ceiling}')
        logger.debug('%s set to %d', name, value)
        get.value = value

    get.value = default
    get.ceiling = ceiling
    return get, set_


# nodes visited by enumerate_models before giving up
get_enumeration_budget, set_enumeration_budget = _bound_helper('enumeration budget', 200_000, 5_000_000)
# universe size of enumerated or built models
get_max_model_size, set_max_model_size = _bound_helper('model size', 8, 64)
# search range of unbounded quantifiers over the natural numbers
get_witness_bound, set_witness_bound = _bound_helper('witness bound', 64, 100_000)
# largest class size examined by the scattered quantifier elimination
get_qe_bound, set_qe_bound = _bound_helper('qe bound', 10, 40)
# register machine steps
get_fuel, set_fuel = _bound_helper('fuel', 10_000, 10_000_000)
# back-and-forth steps and candidate searches
get_iso_budget, set_iso_budget = _bound_helper('iso budget', 20_000, 1_000_000)
# largest scheme index emitted by an axiom stream
get_scheme_bound, set_scheme_bound = _bound_helper('scheme bound', 32, 4096)


def get_workers():
    """Return the worker count, read from ``LOGIC_WORKBENCH_WORKERS`` (defaults to 1)."""
    raw = os.environ.get(WORKERS_ENV_VAR, '')
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        logger.debug('Ignoring invalid %s=%r, running sequentially.', WORKERS_ENV_VAR, raw)
        return 1
    return max(1, min(workers, 64))


def check_bound(name, value, getter):
    """Raise if ``value`` is above the ceiling of the bound read by ``getter``."""
    if value is None:
        return getter()
    if value < 0:
        raise ValueError(f'{name} must be non negative, got {value}')
    if value > getter.ceiling:
        raise ValueError(f'{name} {value} exceeds its ceiling {getter.ceiling}')
    return value
