"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from starlab.symbols import PhaseSymbol

small_fractions = st.fractions(min_value=-4, max_value=4, max_denominator=6)


def exponents(modes, max_exp):
    return st.tuples(*[st.integers(0, max_exp)] * modes)


@st.composite
def exact_symbols(draw, modes=1, max_exp=2, max_terms=4):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        key = (draw(exponents(modes, max_exp)), draw(exponents(modes, max_exp)))
        terms[key] = terms.get(key, Fraction(0)) + draw(small_fractions)
    return PhaseSymbol(modes, terms)
