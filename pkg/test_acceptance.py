"""
受け入れテスト
ランダムな Fock データから作った状態での MOPS 判定・往復・Hankel 恒等式の総合確認
"""

import random
import time
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from modules.fock import FockData, FockState, extract_fock_data
from modules.hankel import check_relation1, frak_h, hankel_family
from modules.mops import check_relation0, gram_schmidt, has_mops
from modules.ncpoly import Word, enumerate_words
from modules.oracle import JacobiData, jacobi_moments
from modules.samples import (
    catalan_data,
    gaussian_duplicated_table,
    perturb_moment,
    random_fock_data,
    table_from_fock,
)
from modules.state import check_state, is_faithful_up_to

CANDIDATE_WORDS = ["111", "112", "121", "122", "212", "222"]


@lru_cache(maxsize=None)
def fock_instances() -> Tuple[FockData, ...]:
    rng = random.Random(20240601)
    positive = [random_fock_data(rng, d=2, depth=3) for _ in range(100)]
    degenerate = [random_fock_data(rng, d=2, depth=3, zeroed=rng.randint(1, 4)) for _ in range(20)]
    return tuple(positive + degenerate)


def test_catalan_reproduction():
    start = time.perf_counter()
    state = FockState(catalan_data(4))
    moments = [state.moment(Word((1,) * k, 1)) for k in range(9)]
    assert moments == [1, 0, 1, 0, 2, 0, 5, 0, 14]
    assert jacobi_moments(JacobiData((0,) * 5, (1,) * 4), 8) == moments
    assert time.perf_counter() - start < 1.0


def test_fock_states_have_mops():
    for data in fock_instances():
        state = FockState(data)
        assert has_mops(state, 3).ok
        assert check_relation0(state, 3).ok


def test_extraction_roundtrip_reproduces_moments():
    for data in fock_instances():
        state = FockState(data)
        extracted = FockState(extract_fock_data(state, gram_schmidt(state, 3), 3))
        for word in enumerate_words(2, 7):
            assert extracted.moment(word) == state.moment(word)


def test_hankel_family_on_faithful_mops_states():
    rng = random.Random(99)
    for _ in range(20):
        state = FockState(random_fock_data(rng, d=2, depth=2))
        assert hankel_family(state, 2).polynomials == gram_schmidt(state, 2).polynomials
        assert check_relation1(state, 2).ok


def perturbed_states(count: int) -> List:
    """次数 3 のモーメントを少しずらした、忠実だが MOPS でない状態"""
    rng = random.Random(4321)
    states = []
    while len(states) < count:
        table = table_from_fock(random_fock_data(rng, d=2, depth=2), 4)
        for text in CANDIDATE_WORDS:
            delta = Fraction(1)
            chosen = None
            for _ in range(12):
                candidate = perturb_moment(table, Word.parse(text, 2), delta)
                if check_state(candidate).ok and is_faithful_up_to(candidate, 2) and not has_mops(candidate, 2).ok:
                    chosen = candidate
                    break
                delta /= 2
            if chosen is not None:
                states.append(chosen)
                break
    return states


def test_relation1_and_has_mops_agree_on_perturbed_states():
    for table in perturbed_states(20):
        verdict = has_mops(table, 2)
        relation = check_relation1(table, 2)
        assert not verdict.ok and not relation.ok
        assert relation.witness == verdict.witness
        assert relation.value == verdict.value
        assert check_relation0(table, 2).witness == verdict.witness


def test_zero_mean_degree_two_identity():
    """φ(x_i x_j x_s x_t) = φ(x_i x_j)φ(x_s x_t) + Σ_k φ(x_i x_j x_k)φ(x_k x_s x_t)/φ(x_k²)"""
    rng = random.Random(2718)
    for _ in range(20):
        state = FockState(random_fock_data(rng, d=2, depth=2, zero_mean=True))

        def phi(*letters):
            return state.moment(Word(letters, 2))

        for i in (1, 2):
            for j in (1, 2):
                for s in (1, 2):
                    for t in (1, 2):
                        if (i, j) == (t, s):
                            continue
                        rhs = phi(i, j) * phi(s, t)
                        for k in (1, 2):
                            if phi(k, k) != 0:
                                rhs += phi(i, j, k) * phi(k, s, t) / phi(k, k)
                        assert phi(i, j, s, t) == rhs


def test_duplicated_gaussian_negative_control():
    table = gaussian_duplicated_table()
    assert [table.moment(Word((1,) * k, 2)) for k in range(5)] == [1, 0, 1, 0, 3]
    verdict = has_mops(table, 1)
    assert not verdict.ok
    assert verdict.witness == (Word.of(2, 1), Word.of(2, 2))
    assert frak_h(table, 2) == 0
