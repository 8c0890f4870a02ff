from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from freeeuler.algebra import NcPoly, VectorField
from freeeuler.scalars import gauss

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def words(n, max_len):
    return st.lists(st.integers(1, n), max_size=max_len).map(tuple)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def gaussian(draw, complex_coeffs=True):
    re = draw(rationals)
    im = draw(rationals) if complex_coeffs else Fraction(0)
    return gauss(re, im)


@st.composite
def polys(draw, n=2, max_degree=3, max_terms=6, complex_coeffs=True):
    terms = draw(
        st.dictionaries(words(n, max_degree), gaussian(complex_coeffs), max_size=max_terms)
    )
    return NcPoly(n, terms)


@st.composite
def fields(draw, n=2, max_degree=3, max_terms=5, complex_coeffs=True):
    return VectorField([draw(polys(n, max_degree, max_terms, complex_coeffs)) for _ in range(n)])


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(module.RESULTS, key=lambda k: (int(str(k).rstrip("b")), str(k))):
        terminalreporter.write_line(module.RESULTS[key])
