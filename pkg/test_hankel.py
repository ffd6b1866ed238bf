"""
Hankel 行列式のテスト
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.errors import DegreeBoundError, InvalidStateError, NotFaithfulError
from modules.fock import FockState
from modules.hankel import (
    HankelFrame,
    build_frame,
    check_relation1,
    det_M,
    frak_h,
    frame_dimension,
    h,
    h_pair,
    hankel_family,
)
from modules.linalg import bareiss_det, minor
from modules.mops import gram_schmidt, has_mops
from modules.ncpoly import NcPolynomial, Word, enumerate_words, level_words
from modules.samples import (
    catalan_table,
    free_semicircular_table,
    gaussian_duplicated_table,
    random_fock_data,
)
from modules.state import MomentTable


def test_catalan_determinants():
    table = catalan_table()
    assert frak_h(table, 0) == 1
    assert frak_h(table, 1) == 1
    assert frak_h(table, 2) == 1
    assert h(table, Word((1,), 1)) == 1
    assert h(table, Word((1, 1), 1)) == 1

    x = NcPolynomial.variable(1, 1)
    one = NcPolynomial.constant(1, 1)
    assert det_M(table, Word((1, 1), 1)) * (1 / frak_h(table, 2)) == x * x - one


def test_frame_shape():
    table = free_semicircular_table(2, 4)
    frame = build_frame(table, Word.of(2, 1, 2))
    assert frame.dimension == frame_dimension(2, 2) == 4
    assert frame.index[-1] == Word.of(2, 1, 2)
    assert [str(w) for w in frame.index[:-1]] == ["", "1", "2"]
    with pytest.raises(DegreeBoundError):
        build_frame(table, Word.of(2, 1, 2, 1))


def test_h_pair_on_diagonal_is_h():
    table = free_semicircular_table(2, 4)
    for u in enumerate_words(2, 2):
        assert h_pair(table, u, u) == h(table, u)


def test_hankel_family_equals_gram_schmidt_on_catalan():
    table = catalan_table()
    assert hankel_family(table, 4).polynomials == gram_schmidt(table, 4).polynomials


def test_not_faithful_duplicated_gaussian():
    table = gaussian_duplicated_table()
    assert frak_h(table, 1) == 1
    assert frak_h(table, 2) == 0
    with pytest.raises(NotFaithfulError) as info:
        hankel_family(table, 2)
    assert info.value.degree == 2
    with pytest.raises(NotFaithfulError):
        check_relation1(table, 2)


def test_relation1_on_free_semicircular():
    table = free_semicircular_table(2, 6)
    assert check_relation1(table, 3).ok


@settings(deadline=None, max_examples=20)
@given(st.integers(0, 10 ** 6))
def test_hankel_matches_gram_schmidt_on_faithful_fock_states(seed):
    state = FockState(random_fock_data(random.Random(seed), d=2, depth=2))
    assert hankel_family(state, 2).polynomials == gram_schmidt(state, 2).polynomials
    assert check_relation1(state, 2).ok == has_mops(state, 2).ok


def deg_lex_reversed(d, n):
    """次数ごとにワードを逆順に並べた、次数両立な別順序"""
    words = []
    for k in range(n + 1):
        words.extend(reversed(level_words(d, k)))
    return words


@settings(deadline=None, max_examples=20)
@given(st.integers(0, 10 ** 6))
def test_frak_h_is_order_and_target_independent(seed):
    state = FockState(random_fock_data(random.Random(seed), d=2, depth=2, zeroed=seed % 3))
    for n in (1, 2):
        expected = frak_h(state, n)
        assert frak_h(state, n, deg_lex_reversed(2, n - 1)) == expected
        for u in level_words(2, n):
            rows = build_frame(state, u).rows()
            last = len(rows) - 1
            assert bareiss_det(minor(rows, last, last)) == expected
    u = Word.of(2, 2, 1)
    assert h(state, u, deg_lex_reversed(2, 1)) == h(state, u)


def test_frame_requires_hermitian_state():
    moments = {word: Fraction(0) for word in enumerate_words(2, 4)}
    moments[Word.empty(2)] = Fraction(1)
    moments[Word.of(2, 1, 2)] = Fraction(1)
    table = MomentTable(2, 4, moments)
    with pytest.raises(InvalidStateError):
        build_frame(table, Word.of(2, 1, 2))
    with pytest.raises(InvalidStateError):
        HankelFrame(2, Word.of(2, 1), (Word.empty(2), Word.of(2, 1)), ((Fraction(1), Fraction(1)), (Fraction(0), Fraction(1))))
