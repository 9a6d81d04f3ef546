from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mzbranch.poly import Polynomial, component_basis
from mzbranch.weyl import WeylOperator

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def exponents(m, max_exp=2):
    return st.tuples(*[st.integers(0, max_exp)] * (3 * m))


@st.composite
def polynomials(draw, m=2, max_terms=4, max_exp=2):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        terms[draw(exponents(m, max_exp))] = draw(coefficients)
    return Polynomial(m, terms)


@st.composite
def operators(draw, m=2, max_terms=3, max_exp=1):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        terms[(draw(exponents(m, max_exp)), draw(exponents(m, max_exp)))] = draw(coefficients)
    return WeylOperator(m, terms)


@st.composite
def homogeneous(draw, m, degree):
    basis = component_basis(m, degree)
    picks = draw(st.lists(st.sampled_from(basis), min_size=1, max_size=4))
    terms = {mono: draw(coefficients.filter(bool)) for mono in picks}
    return Polynomial(m, terms)


def frac(p, q=1):
    return Fraction(p, q)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
