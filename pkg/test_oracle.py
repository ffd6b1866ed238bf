"""
オラクル（稠密直交化・3 項漸化式）との照合テスト
"""

import random
from fractions import Fraction

import pytest

from modules.errors import DegreeBoundError, InvalidStateError
from modules.fock import FockState
from modules.mops import gram_schmidt
from modules.ncpoly import Word
from modules.oracle import (
    JacobiData,
    dense_orthogonalize,
    fock_data_from_jacobi,
    jacobi_from_fock_data,
    jacobi_matrix,
    jacobi_moments,
    jacobi_table,
)
from modules.samples import (
    catalan_table,
    gaussian_duplicated_table,
    independent_gaussians_table,
    random_fock_data,
)
from modules.state import is_faithful_up_to, seminorm_sq


def random_jacobi(rng: random.Random, depth: int) -> JacobiData:
    a = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(depth + 1))
    b = tuple(Fraction(rng.randint(1, 4), rng.randint(1, 3)) for _ in range(depth))
    return JacobiData(a, b)


def test_jacobi_catalan():
    j = JacobiData((0, 0, 0), (1, 1))
    assert jacobi_moments(j, 5) == [1, 0, 1, 0, 2, 0]
    assert jacobi_matrix(j)[1] == [1, 0, 1]
    with pytest.raises(DegreeBoundError):
        jacobi_moments(j, 6)


def test_jacobi_validation():
    with pytest.raises(InvalidStateError):
        JacobiData((0, 0), (1, 1))
    with pytest.raises(InvalidStateError):
        JacobiData((0, 0), (-1,))


def test_jacobi_fock_bridge():
    rng = random.Random(7)
    for _ in range(20):
        j = random_jacobi(rng, 4)
        data = fock_data_from_jacobi(j)
        assert jacobi_from_fock_data(data) == j
        state = FockState(data)
        moments = jacobi_moments(j, 9)
        assert [state.moment(Word((1,) * k, 1)) for k in range(10)] == moments


def test_jacobi_table_first_moments():
    j = JacobiData((1, 0), (2,))
    table = jacobi_table(j, 2)
    # φ(x) = a_0, φ(x²) = a_0² + b_1
    assert table.moment(Word((1,), 1)) == 1
    assert table.moment(Word((1, 1), 1)) == 3


def test_dense_orthogonalize_on_faithful_states():
    rng = random.Random(11)
    states = [catalan_table()] + [FockState(random_fock_data(rng, d=2, depth=2)) for _ in range(20)]
    for state in states:
        assert is_faithful_up_to(state, 2)
        assert dense_orthogonalize(state, 2).polynomials == gram_schmidt(state, 2).polynomials


def test_dense_orthogonalize_in_L2_on_degenerate_states():
    rng = random.Random(13)
    states = [gaussian_duplicated_table(), independent_gaussians_table()]
    states += [FockState(random_fock_data(rng, d=2, depth=2, zeroed=3)) for _ in range(20)]
    for state in states:
        dense = dense_orthogonalize(state, 2)
        family = gram_schmidt(state, 2)
        for word in family:
            assert seminorm_sq(state, dense[word] - family[word]) == 0
            assert dense.norm_sq(word) == family.norm_sq(word)
