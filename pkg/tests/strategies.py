"""Hypothesis strategies for small exact series and cubic forms."""

from fractions import Fraction

from hypothesis import strategies as st

from lagcubic.series import FormalSeries, monomials_upto

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def series(draw, nvars=None, order=None, unit=False, min_degree=0):
    nvars = draw(st.integers(1, 2)) if nvars is None else nvars
    if order is None:
        order = st.integers(0, 4)
    if isinstance(order, st.SearchStrategy):
        order = draw(order)
    coeffs = {}
    for exp in monomials_upto(nvars, order):
        if sum(exp) < min_degree:
            continue
        if draw(st.booleans()):
            coeffs[exp] = draw(small_fractions)
    if unit:
        c0 = draw(small_fractions.filter(lambda x: x != 0))
        coeffs[(0,) * nvars] = c0
    return FormalSeries(nvars, order, coeffs)


@st.composite
def polynomials(draw, g=None, min_degree=3, max_degree=4, order=5):
    """Random polynomial of degree between ``min_degree`` and ``max_degree`` as a series."""
    if g is None:
        g = st.integers(1, 3)
    if isinstance(g, st.SearchStrategy):
        g = draw(g)
    coeffs = {}
    for exp in monomials_upto(g, max_degree):
        if draw(st.integers(0, 3)) == 0:
            coeffs[exp] = draw(small_fractions)
    top = [e for e in monomials_upto(g, max_degree) if sum(e) >= min_degree]
    e = draw(st.sampled_from(top))
    coeffs[e] = draw(small_fractions.filter(lambda x: x != 0))
    return FormalSeries(g, order, coeffs)


@st.composite
def cubic_tensors(draw, g=None, max_g=4):
    g = draw(st.integers(1, max_g)) if g is None else g
    t = [[[Fraction(0)] * g for _ in range(g)] for _ in range(g)]
    for i in range(g):
        for j in range(i, g):
            for k in range(j, g):
                v = draw(st.integers(-3, 3))
                for a, b, c in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
                    t[a][b][c] = Fraction(v)
    return t
