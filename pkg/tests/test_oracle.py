from functools import lru_cache

import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasshodge.algebra import QQ, PolyRing, PrimeField
from grasshodge.grassmann import GrassmannianSpec, plucker_relations, plucker_ring
from grasshodge.groebner import IdealPresentation, groebner_basis, hilbert_slice
from grasshodge.lifting import exact_kernel, integer_rows
from grasshodge.linalg import SparseEchelon
from grasshodge.oracle import (
    QuotientTower,
    certified_slice_dim,
    checked_slice_dim,
    eliminate_linear,
    plucker_slice_dim,
    slice_dim_oracle,
    slice_matrix,
)

from strategies import FIELDS, SMALL_SPECS, homogeneous_poly


def plucker_ideal(spec, field=QQ):
    ring = plucker_ring(spec, (), field)
    return IdealPresentation(ring, plucker_relations(spec, ring))


@pytest.mark.parametrize("k, n, a, dim", [(2, 5, 1, 10), (2, 5, 2, 50), (2, 7, 1, 21), (3, 6, 0, 1), (2, 4, 2, 20)])
def test_hook_content(k, n, a, dim):
    assert plucker_slice_dim(GrassmannianSpec(k, n), a) == dim


def test_hook_content_rejects_negative_degree():
    with pytest.raises(ValueError):
        plucker_slice_dim(GrassmannianSpec(2, 5), -1)


@lru_cache(maxsize=None)
def _oracle_plucker(spec, a, field):
    return slice_dim_oracle(plucker_ideal(spec, field), a)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL_SPECS), st.integers(0, 3), st.sampled_from(FIELDS[:2]))
def test_hook_content_matches_oracle(spec, a, field):
    assert plucker_slice_dim(spec, a) == _oracle_plucker(spec, a, field)


def test_zero_ideal_full_slice():
    ring = plucker_ring(GrassmannianSpec(2, 5))
    assert slice_dim_oracle(IdealPresentation(ring, []), 1) == 10


def test_gm_degree_two(gm5_pres):
    assert slice_dim_oracle(gm5_pres.ideal, 2) == 25
    assert slice_dim_oracle(gm5_pres.ideal, 2, method="recursive") == 25


def test_plucker_degree_two_by_both_methods():
    ideal = plucker_ideal(GrassmannianSpec(2, 5))
    assert slice_dim_oracle(ideal, 2, method="direct") == 50
    assert slice_dim_oracle(ideal, 2, method="recursive") == 50
    mat = slice_matrix(ideal, 2)
    assert mat.shape == (5, 55)


def test_unknown_method():
    with pytest.raises(ValueError):
        slice_dim_oracle(plucker_ideal(GrassmannianSpec(2, 4)), 1, method="magic")


def test_lifted_tower_on_gm(gm5_pres):
    tower = QuotientTower(gm5_pres.ideal, QQ, lifted=True)
    assert [tower.dim((0, e)) for e in range(6)] == [1, 10, 25, 10, 1, 0]
    with pytest.raises(ValueError):
        slice_dim_oracle(gm5_pres.ideal, 2, PrimeField(), method="lifted")


def test_checked_dim_rechecks_on_disagreement(gm5_pres):
    assert checked_slice_dim(gm5_pres.ideal, 2, expected=25) == (25, "GF(32003)")
    # a wrong expectation sends the computation back over QQ, which still says 25
    assert checked_slice_dim(gm5_pres.ideal, 2, expected=24) == (25, "QQ")


def small_ring(field):
    return PolyRing(["x[1,2]", "x[1,3]", "x[1,4]", "x[2,3]"], [(0, 1)] * 4, field)


@st.composite
def small_ideal(draw):
    ring = small_ring(draw(st.sampled_from(FIELDS)))
    k = draw(st.integers(1, 3))
    gens = [draw(homogeneous_poly(ring, draw(st.integers(1, 3)), max_terms=3)) for _ in range(k)]
    return IdealPresentation(ring, gens)


@settings(max_examples=200, deadline=None)
@given(small_ideal())
def test_oracle_agrees_with_groebner(ideal):
    gb = groebner_basis(ideal)
    tower = QuotientTower(ideal)
    for e in range(5):
        h = hilbert_slice(gb, e)
        assert slice_dim_oracle(ideal, e, method="direct") == h
        assert slice_dim_oracle(ideal, e, method="recursive", tower=tower) == h


# -- certified kernels ---------------------------------------------------------------

def _qq_rank(rows):
    ech = SparseEchelon(QQ)
    for r in rows:
        ech.add({c: QQ(v) for c, v in r.items()})
    return ech.rank


@st.composite
def int_matrix(draw, big=False):
    ncols = draw(st.integers(1, 8))
    nrows = draw(st.integers(0, 8))
    hi = 2 ** 40 if big else 6
    rows = []
    for _ in range(nrows):
        cols = draw(st.lists(st.integers(0, ncols - 1), max_size=ncols, unique=True))
        rows.append({c: draw(st.integers(-hi, hi)) for c in cols})
    # duplicate a combination so rank drops show up often
    if len(rows) >= 2 and draw(st.booleans()):
        a, b = rows[0], rows[1]
        rows.append({c: 2 * a.get(c, 0) - 3 * b.get(c, 0) for c in set(a) | set(b)})
    return rows, ncols


def _check_kernel(rows, ncols):
    ker = exact_kernel(rows, ncols)
    assert ker.rank == _qq_rank(rows)
    assert sorted(ker.pivots + ker.free) == list(range(ncols))
    # every row maps to zero in the quotient spanned by the free columns
    for r in rows:
        img = [gmpy2.mpq(0)] * len(ker.free)
        for c, v in r.items():
            for j, w in ker.coords[c].items():
                img[j] += v * w
        assert not any(img)
    return ker


@settings(max_examples=200, deadline=None)
@given(int_matrix())
def test_exact_kernel_small_entries(m):
    _check_kernel(*m)


@settings(max_examples=200, deadline=None)
@given(int_matrix(big=True))
def test_exact_kernel_wide_entries(m):
    _check_kernel(*m)


def test_exact_kernel_methods():
    assert exact_kernel([], 3).method == "trivial"
    assert exact_kernel([{0: 1}, {1: 1}], 2).method == "full-rank"
    assert exact_kernel([{0: 2, 1: 3}], 2).method == "p-adic"
    assert exact_kernel([{0: 2 ** 45 + 1, 1: 3}], 2).method == "crt"


def test_integer_rows_are_primitive():
    rows = integer_rows([{0: QQ(1) / 2, 1: QQ(3) / 4}, {}, {2: 6, 3: 4}])
    assert rows == [{0: 2, 1: 3}, {2: 3, 3: 2}]


def test_linear_elimination_keeps_dims(z21_pres):
    red = eliminate_linear(z21_pres.ideal)
    assert red.eliminated == ["x[1,2]"]
    assert red.ideal.ring.nvars == z21_pres.ring.nvars - 1
    fp = PrimeField()
    big = QuotientTower(z21_pres.ideal.with_field(fp))
    small = QuotientTower(red.ideal.with_field(fp))
    for d in [(0, 1), (1, -1), (1, 0), (2, -2), (3, -3)]:
        assert big.dim(d) == small.dim(d)


def test_certified_cells_of_z21(z21_pres):
    red = eliminate_linear(z21_pres.ideal)
    c = certified_slice_dim(z21_pres.ideal, (1, -1), reduction=red)
    assert c.certified and c.value == 10 == c.upper
    assert certified_slice_dim(z21_pres.ideal, (1, -2), reduction=red).value == 1
    c = certified_slice_dim(z21_pres.ideal, (2, -2), reduction=red)
    assert c.value == 25
    c = certified_slice_dim(z21_pres.ideal, (5, -4), reduction=red)
    assert c.value == 0 and c.method == "semicontinuity"
    c = certified_slice_dim(z21_pres.ideal, (2, -2), reduction=red, direct_limit=10)
    assert c.certified and c.value == 25 and c.method == "multimodular"
    c = certified_slice_dim(z21_pres.ideal, (2, -2), reduction=red, direct_limit=10, max_bits=0)
    assert not c.certified and c.upper == 25 and "columns" in c.detail


def test_certification_needs_rationals(gm5_pres):
    with pytest.raises(ValueError):
        certified_slice_dim(gm5_pres.ideal.with_field(PrimeField()), 2)
