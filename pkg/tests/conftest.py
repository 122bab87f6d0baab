import hypothesis.strategies as st
from hypothesis import settings

from laguerre_biortho import ExpPoly

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

coeff = st.floats(-1.0, 1.0, allow_nan=False).filter(lambda x: abs(x) > 1e-3)
rate = st.floats(0.6, 4.0, allow_nan=False)


@st.composite
def exppolys(draw, max_terms=3, max_degree=3):
    """Nonzero exponential polynomials with well separated rates."""
    n = draw(st.integers(1, max_terms))
    rates = draw(st.lists(rate, min_size=n, max_size=n, unique_by=lambda r: round(r, 1)))
    terms = [(r, draw(st.lists(coeff, min_size=1, max_size=max_degree + 1))) for r in rates]
    return ExpPoly(terms)
