import functools

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from spectral_gamma import algebra, groups

settings.register_profile(
    "suite", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("suite")


@functools.lru_cache(maxsize=None)
def _gens(spec):
    return tuple(groups.generators(spec))


def element_strategy(spec, max_len=6):
    """Random group elements as products of standard generators."""
    gens = _gens(spec)

    def build(idxs):
        g = groups.identity(spec)
        for i in idxs:
            g = groups.multiply(g, gens[i], spec)
        return g

    return st.lists(st.integers(0, len(gens) - 1), max_size=max_len).map(build)


def gaussian_int_strategy():
    ints = st.integers(-3, 3)
    return st.tuples(ints, ints).filter(lambda t: t != (0, 0))


def alg_element_strategy(spec, max_terms=4, max_len=4, exact=False):
    """Random nonzero finitely supported elements with small integer data."""
    coeff = gaussian_int_strategy()

    def build(pairs):
        terms = {}
        for g, (re, im) in pairs:
            terms[g] = complex(re, im)
        return algebra.element(spec, terms, exact=exact)

    return st.lists(
        st.tuples(element_strategy(spec, max_len), coeff),
        min_size=1, max_size=max_terms).map(build).filter(lambda a: not algebra.is_zero(a))
