import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netbound.errors import IndexOutOfRange, NonSquare, Singular
from netbound.exactalg import (
    GF2,
    MERSENNE_31,
    QQ,
    ExactMatrix,
    FieldSpec,
    SupportPattern,
    cofactor_submatrix,
    determinant,
    generic_rank,
    has_perfect_matching,
    inverse,
    is_prime,
    max_matching,
    min_cofactor_rank,
    rank,
    schwartz_zippel_rank,
)
from oracles import brute_matching, leibniz_det, minor_rank

GF3, GF5 = FieldSpec.prime(3), FieldSpec.prime(5)


def M(rows, field=GF2, cols=None):
    return ExactMatrix.from_rows(rows, field, cols=cols)


# ------------------------------------------------------------------ fields

def test_field_rejects_composite():
    with pytest.raises(ValueError):
        FieldSpec.prime(4)
    assert is_prime(MERSENNE_31) and not is_prime(1) and not is_prime(561)


def test_entries_are_reduced_and_validated():
    assert M([[3, 5]], GF3).to_lists() == [[0, 2]]
    q = M([["1/2", 3]], QQ)
    assert q[0, 0] == Fraction(1, 2) and q[0, 1] == 3
    with pytest.raises(ValueError):
        M([[1, 2], [3]], GF3)


# ------------------------------------------------------------------ rank

def test_rank_empty():
    assert rank(ExactMatrix.zeros(0, 3, GF2)) == 0
    assert rank(ExactMatrix.zeros(3, 0, QQ)) == 0


def test_rank_z_channel_row():
    assert rank(M([[1, 1]])) == 1


def test_rank_of_a_times_inverse():
    rng = random.Random(5)
    while True:
        A = M([[rng.randrange(5) for _ in range(4)] for _ in range(4)], GF5)
        if determinant(A) != 0:
            break
    assert rank(A @ inverse(A)) == 4


matrices = st.integers(0, 4).flatmap(lambda r: st.integers(0, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    .map(lambda rows: (rows, c))))
fields = st.sampled_from([GF2, GF3, GF5, QQ])


@settings(max_examples=150, deadline=None)
@given(matrices, fields)
def test_rank_matches_minor_oracle(mc, field):
    rows, cols = mc
    m = M(rows, field, cols=cols)
    p = None if field.kind == "rational" else field.p
    assert rank(m) == minor_rank(m.to_lists(), p)


@settings(max_examples=150, deadline=None)
@given(matrices, fields)
def test_rank_transpose(mc, field):
    rows, cols = mc
    m = M(rows, field, cols=cols)
    assert rank(m) == rank(m.transpose())


# ------------------------------------------------------------------ determinant / inverse

def test_determinant_examples():
    assert determinant(ExactMatrix.identity(3, GF2)) == 1
    assert determinant(M([[1, 1], [1, 1]])) == 0
    # permutation expansion: 1*1 - 1*0
    assert leibniz_det([[1, 1], [0, 1]], 2) == 1
    assert determinant(M([[1, 1], [0, 1]])) == 1


def test_determinant_non_square():
    with pytest.raises(NonSquare):
        determinant(M([[1, 0, 1]]))


square = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 7), min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=150, deadline=None)
@given(square, fields)
def test_determinant_matches_leibniz(rows, field):
    m = M(rows, field)
    p = None if field.kind == "rational" else field.p
    assert determinant(m) == leibniz_det(m.to_lists(), p)


@settings(max_examples=150, deadline=None)
@given(square, fields)
def test_full_rank_iff_nonzero_det_and_inverse(rows, field):
    m = M(rows, field)
    n = m.rows
    assert (determinant(m) != 0) == (rank(m) == n)
    if determinant(m) != 0:
        inv = inverse(m)
        assert (inv @ m).is_identity() and (m @ inv).is_identity()
    else:
        with pytest.raises(Singular):
            inverse(m)


def test_inverse_examples():
    assert inverse(ExactMatrix.identity(3, GF3)) == ExactMatrix.identity(3, GF3)
    up = M([[1, 1], [0, 1]])
    assert inverse(up) == up and (up @ up).is_identity()
    assert inverse(M([[2, 0], [0, 4]], QQ)).to_lists() == [[Fraction(1, 2), 0], [0, Fraction(1, 4)]]


# ------------------------------------------------------------------ cofactors

def test_cofactor_examples():
    one = cofactor_submatrix(M([[1]]), 0, 0)
    assert (one.rows, one.cols) == (0, 0) and determinant(one) == 1
    I3 = ExactMatrix.identity(3, GF2)
    assert cofactor_submatrix(I3, 0, 0) == ExactMatrix.identity(2, GF2)
    assert cofactor_submatrix(I3, 0, 1).to_lists() == [[0, 0], [0, 1]]
    with pytest.raises(IndexOutOfRange):
        cofactor_submatrix(I3, 3, 0)


@settings(max_examples=100, deadline=None)
@given(square, st.sampled_from([GF2, GF3]))
def test_cofactor_rank_of_invertible(rows, field):
    m = M(rows, field)
    if determinant(m) != 0 and m.rows > 1:
        assert min_cofactor_rank(m) >= m.rows - 2


# ------------------------------------------------------------------ matchings

def test_generic_rank_examples():
    assert generic_rank(SupportPattern.identity(5)) == 5
    assert generic_rank(SupportPattern.zeros(4)) == 0
    tri = SupportPattern.banded(5, 1)
    assert brute_matching([list(r) for r in tri.bits]) == 5
    assert generic_rank(tri) == 5


def test_perfect_matching_examples():
    assert has_perfect_matching(SupportPattern.identity(3))
    assert not has_perfect_matching(SupportPattern.from_rows([[1, 1], [0, 0]]))
    tri4 = SupportPattern.banded(4, 1)
    assert all(tri4[a - 1, b - 1] for a, b in [(1, 2), (2, 1), (3, 4), (4, 3)])
    assert has_perfect_matching(tri4)
    assert not has_perfect_matching(SupportPattern.full(2, 3))


def test_matching_is_reproducible_and_valid():
    p = SupportPattern.from_rows([[1, 1, 0], [1, 0, 1], [0, 1, 1]])
    m = max_matching(p)
    assert m == max_matching(p)
    assert len(m) == 3 and len(set(m.values())) == 3
    assert all(p[r, c] for r, c in m.items())


patterns = st.integers(0, 6).flatmap(lambda r: st.integers(0, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)
    .map(lambda rows: SupportPattern.from_rows(rows, cols=c))))


@settings(max_examples=200, deadline=None)
@given(patterns)
def test_generic_rank_matches_brute_matching(p):
    assert generic_rank(p) == brute_matching([list(r) for r in p.bits])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: st.lists(
    st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_generic_rank_agrees_with_instantiation(rows):
    p = SupportPattern.from_rows(rows)
    assert schwartz_zippel_rank(p, trials=4, seed=1) == generic_rank(p)


def test_schwartz_zippel_examples():
    assert schwartz_zippel_rank(SupportPattern.identity(4), trials=1) == 4
    assert schwartz_zippel_rank(SupportPattern.zeros(3), trials=3) == 0
    with pytest.raises(ValueError):
        schwartz_zippel_rank(SupportPattern.identity(2), trials=1, prime=101)


def test_schwartz_zippel_on_random_6x6_patterns():
    agree = 0
    for seed in range(1000):
        rng = random.Random(seed)
        p = SupportPattern.from_rows([[int(rng.random() < 0.4) for _ in range(6)] for _ in range(6)])
        agree += schwartz_zippel_rank(p, trials=1, seed=seed) == generic_rank(p)
    assert agree >= 999


def test_generic_rank_is_max_over_many_instantiations():
    rng = random.Random(11)
    for _ in range(4):
        n = rng.randint(5, 8)
        p = SupportPattern.from_rows([[int(rng.random() < 0.35) for _ in range(n)] for _ in range(n)])
        field = FieldSpec.prime(MERSENNE_31)
        best = max(rank(p.instantiate(field, random.Random(s))) for s in range(1000))
        assert best == generic_rank(p)
