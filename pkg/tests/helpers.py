from fractions import Fraction

from hypothesis import strategies as st

from lapinv.grammar import parse_polynomial
from lapinv.poly import Polynomial


def P(text, nvars=None):
    return parse_polynomial(text, nvars)


small_rationals = st.builds(
    Fraction, st.integers(-9, 9), st.integers(1, 4)
)


@st.composite
def polynomials(draw, nvars=None, max_degree=4, max_terms=6, homogeneous=None):
    n = nvars if nvars is not None else draw(st.integers(1, 3))
    d = homogeneous
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        if d is None:
            exp = tuple(draw(st.integers(0, max_degree)) for _ in range(n))
            if sum(exp) > max_degree:
                continue
        else:
            # random composition of d into n parts
            cuts = sorted(draw(st.integers(0, d)) for _ in range(n - 1))
            exp = tuple(b - a for a, b in zip([0] + cuts, cuts + [d]))
        terms[exp] = draw(small_rationals)
    return Polynomial(terms, n)
