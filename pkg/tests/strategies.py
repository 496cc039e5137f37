"""Hypothesis strategies for polynomials in small Plücker rings."""

from hypothesis import strategies as st

from grasshodge.algebra import QQ, PrimeField
from grasshodge.grassmann import GrassmannianSpec, plucker_ring

SMALL_SPECS = (GrassmannianSpec(2, 4), GrassmannianSpec(2, 5), GrassmannianSpec(3, 6))
FIELDS = (QQ, PrimeField(32003), PrimeField(7))

coefficients = st.integers(min_value=-9, max_value=9).filter(bool)


@st.composite
def monomial(draw, nvars, degree):
    m = [0] * nvars
    for _ in range(degree):
        m[draw(st.integers(0, nvars - 1))] += 1
    return tuple(m)


@st.composite
def homogeneous_poly(draw, ring, degree, max_terms=4):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        terms[draw(monomial(ring.nvars, degree))] = draw(coefficients)
    return ring.from_dict(terms)


@st.composite
def poly(draw, ring, max_degree=3, max_terms=5):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        terms[draw(monomial(ring.nvars, draw(st.integers(0, max_degree))))] = draw(coefficients)
    return ring.from_dict(terms)


@st.composite
def spec_and_ring(draw, fields=(QQ,)):
    spec = draw(st.sampled_from(SMALL_SPECS))
    field = draw(st.sampled_from(fields))
    return spec, plucker_ring(spec, (), field)
