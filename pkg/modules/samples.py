"""
サンプル状態モジュール
組み込みの例（Catalan、自由半円、重複ガウス変数など）とテスト用のランダムFockデータ
"""

import random
from fractions import Fraction
from typing import Dict, List, Optional

from .fock import FockData, FockState
from .ncpoly import Word, enumerate_words, level_words, reverse
from .state import MomentTable, restrict


def _zero_matrix(size: int) -> List[List[Fraction]]:
    return [[Fraction(0)] * size for _ in range(size)]


def constant_fock_data(d: int, depth: int, weight: Fraction = Fraction(1)) -> FockData:
    """C ≡ weight, T ≡ 0"""
    C = {w: Fraction(weight) for k in range(1, depth + 1) for w in level_words(d, k)}
    T = {i: tuple(_zero_matrix(d ** k) for k in range(depth + 1)) for i in range(1, d + 1)}
    return FockData(d, depth, C, T)


def catalan_data(depth: int) -> FockData:
    """d=1, C≡1, T≡0（偶数次モーメントが Catalan 数）"""
    return constant_fock_data(1, depth)


def free_semicircular_data(d: int, depth: int) -> FockData:
    """自由半円系（C ≡ 1, T ≡ 0）"""
    return constant_fock_data(d, depth)


def table_from_fock(data: FockData, max_degree: int) -> MomentTable:
    return restrict(FockState(data), max_degree)


def catalan_table(max_degree: int = 8) -> MomentTable:
    return table_from_fock(catalan_data(max_degree // 2), max_degree)


def free_semicircular_table(d: int = 2, max_degree: int = 6) -> MomentTable:
    return table_from_fock(free_semicircular_data(d, max_degree // 2), max_degree)


def gaussian_moment(k: int) -> Fraction:
    """E[X^k]、X は標準ガウス（(k−1)!! または 0）"""
    if k % 2:
        return Fraction(0)
    value = 1
    for odd in range(k - 1, 0, -2):
        value *= odd
    return Fraction(value)


def gaussian_duplicated_table(d: int = 2, max_degree: int = 4) -> MomentTable:
    """φ(x_u) = E[X^{|u|}]: 全変数が同じガウス変数（忠実でも MOPS でもない）"""
    moments = {w: gaussian_moment(len(w)) for w in enumerate_words(d, max_degree)}
    return MomentTable(d, max_degree, moments)


def independent_gaussians_table(max_degree: int = 4) -> MomentTable:
    """d=2、古典的に独立な中心化ガウス変数 X, Y の混合モーメント"""
    moments = {}
    for w in enumerate_words(2, max_degree):
        ones = sum(1 for letter in w if letter == 1)
        moments[w] = gaussian_moment(ones) * gaussian_moment(len(w) - ones)
    return MomentTable(2, max_degree, moments)


def _random_weight(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 4), rng.randint(1, 3))


def _suffix_product(C: Dict[Word, Fraction], word: Word) -> Fraction:
    weight = Fraction(1)
    for suffix in word.suffixes():
        weight *= C[suffix]
    return weight


def random_fock_data(
    rng: random.Random,
    d: int = 2,
    depth: int = 3,
    zero_mean: bool = False,
    zeroed: int = 0,
) -> FockData:
    """
    転置条件を満たすランダムな Fock データ。

    C は正の有理数。zeroed > 0 なら C の成分をその個数だけ 0 にし、
    K_C = 0 となる行と列の T を 0 にする。T = diag(1/K_C)·S（S は対称）。
    """
    C = {w: _random_weight(rng) for k in range(1, depth + 1) for w in level_words(d, k)}
    if zeroed:
        for word in rng.sample(sorted(C), min(zeroed, len(C))):
            C[word] = Fraction(0)

    T = {}
    for i in range(1, d + 1):
        levels = []
        for k in range(depth + 1):
            words = level_words(d, k)
            weights = [_suffix_product(C, w) for w in words]
            size = len(words)
            S = _zero_matrix(size)
            for a in range(size):
                for b in range(a, size):
                    S[a][b] = S[b][a] = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            matrix = _zero_matrix(size)
            for a in range(size):
                for b in range(size):
                    if weights[a] and weights[b]:
                        matrix[a][b] = S[a][b] / weights[a]
            if k == 0 and zero_mean:
                matrix = _zero_matrix(1)
            levels.append(matrix)
        T[i] = tuple(levels)
    return FockData(d, depth, C, T)


def perturb_moment(table: MomentTable, word: Word, delta: Fraction) -> MomentTable:
    """φ(x_u) と φ(x_{u^op}) を同時に delta だけずらす（*-整合を保つ）"""
    moments = dict(table.moments)
    targets = {word, reverse(word)}
    for target in targets:
        moments[target] = moments[target] + delta
    return MomentTable(table.d, table.max_degree, moments)


def builtin_table(name: str, max_degree: Optional[int] = None) -> MomentTable:
    """CLI `gen` 用の組み込みモーメント表"""
    if name == "catalan":
        return catalan_table(8 if max_degree is None else max_degree)
    if name == "free-semicircular-d2":
        return free_semicircular_table(2, 6 if max_degree is None else max_degree)
    if name == "gaussian-duplicated":
        return gaussian_duplicated_table(2, 4 if max_degree is None else max_degree)
    raise KeyError(name)


def builtin_fock_data(name: str, depth: int) -> FockData:
    """CLI `gen --fock` 用の組み込み Fock データ"""
    if name == "catalan":
        return catalan_data(depth)
    if name == "free-semicircular-d2":
        return free_semicircular_data(2, depth)
    raise KeyError(name)
