"""
オラクルモジュール
検算専用の素朴な実装: 稠密な正規方程式による直交化と 1 変数 3 項漸化式
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import DegreeBoundError, InvalidStateError
from .fock import FockData
from .mops import MonicFamily
from .ncpoly import NcPolynomial, Word, enumerate_words
from .state import MomentTable, StateHandle


@dataclass(frozen=True)
class JacobiData:
    """対角 a_0..a_K と非対角の重み b_1..b_K（b_k ≥ 0）"""

    a: Tuple[Fraction, ...]
    b: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(Fraction(x) for x in self.a))
        object.__setattr__(self, "b", tuple(Fraction(x) for x in self.b))
        if len(self.a) != len(self.b) + 1:
            raise InvalidStateError(f"a は b より 1 つ長い必要があります: len(a)={len(self.a)}, len(b)={len(self.b)}")
        if any(x < 0 for x in self.b):
            raise InvalidStateError("b は非負である必要があります")

    @property
    def depth(self) -> int:
        return len(self.b)


def _matmul(left: Sequence[Sequence[Fraction]], right: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    size = len(left)
    return [
        [sum((left[i][k] * right[k][j] for k in range(size)), Fraction(0)) for j in range(size)]
        for i in range(size)
    ]


def jacobi_matrix(j: JacobiData) -> List[List[Fraction]]:
    """X e_k = e_{k+1} + a_k e_k + b_k e_{k−1} の (K+1)×(K+1) 切断"""
    size = j.depth + 1
    matrix = [[Fraction(0)] * size for _ in range(size)]
    for k in range(size):
        matrix[k][k] = j.a[k]
        if k + 1 < size:
            matrix[k + 1][k] = Fraction(1)
        if k >= 1:
            matrix[k - 1][k] = j.b[k - 1]
    return matrix


def jacobi_moments(j: JacobiData, m: int) -> List[Fraction]:
    """次数 0..m のモーメントを行列のべき乗で直接計算（m ≤ 2K+1）"""
    if m > 2 * j.depth + 1:
        raise DegreeBoundError(f"次数 {m} には深さ {m // 2} 以上が必要です（現在 {j.depth}）")
    matrix = jacobi_matrix(j)
    size = len(matrix)
    power = [[Fraction(int(r == c)) for c in range(size)] for r in range(size)]
    moments = []
    for _ in range(m + 1):
        moments.append(power[0][0])
        power = _matmul(power, matrix)
    return moments


def jacobi_table(j: JacobiData, max_degree: int) -> MomentTable:
    """d = 1 のモーメント表"""
    moments = jacobi_moments(j, max_degree)
    return MomentTable(1, max_degree, {Word((1,) * k, 1): moments[k] for k in range(max_degree + 1)})


def fock_data_from_jacobi(j: JacobiData) -> FockData:
    """C^(k) = b_k, T^(k) = [a_k] の d = 1 Fock データ"""
    C = {Word((1,) * k, 1): j.b[k - 1] for k in range(1, j.depth + 1)}
    T = {1: tuple([[j.a[k]]] for k in range(j.depth + 1))}
    return FockData(1, j.depth, C, T)


def jacobi_from_fock_data(data: FockData) -> JacobiData:
    if data.d != 1:
        raise InvalidStateError(f"Jacobi データは d = 1 のみ: d={data.d}")
    a = tuple(data.T[1][k][0][0] for k in range(data.depth + 1))
    b = tuple(data.C[Word((1,) * k, 1)] for k in range(1, data.depth + 1))
    return JacobiData(a, b)


def _ip(s: StateHandle, v: Word, w: Word) -> Fraction:
    return s.moment(Word(tuple(reversed(v.letters)) + w.letters, s.d))


def _solve_skipping_dependent(matrix: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    """簡約階段形まで消去し、従属な行は読み飛ばす（自由変数は 0）"""
    rows = [list(row) + [value] for row, value in zip(matrix, rhs)]
    size = len(matrix)
    pivots: List[int] = []
    r = 0
    for col in range(size):
        pivot = next((i for i in range(r, size) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][col]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(size):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, size):
        if rows[i][size] != 0:
            raise InvalidStateError("正規方程式が不整合です（状態が正値ではありません）")
    solution = [Fraction(0)] * size
    for i, col in enumerate(pivots):
        solution[col] = rows[i][size]
    return solution


def dense_orthogonalize(s: StateHandle, n: int) -> MonicFamily:
    """x_u − Σ c_w x_w を低次の全単項式と直交させる係数を正規方程式で解く"""
    if 2 * n > s.bound:
        raise DegreeBoundError(f"dense_orthogonalize: 必要な次数 {2 * n} が上限 {s.bound} を超えています")
    d = s.d
    polynomials: Dict[Word, NcPolynomial] = {}
    norms: Dict[Word, Fraction] = {}
    for u in enumerate_words(d, n):
        lower = enumerate_words(d, len(u) - 1) if len(u) else []
        gram = [[_ip(s, v, w) for w in lower] for v in lower]
        rhs = [_ip(s, v, u) for v in lower]
        coeffs = _solve_skipping_dependent(gram, rhs) if lower else []
        terms = {u: Fraction(1)}
        for w, c in zip(lower, coeffs):
            terms[w] = -c
        poly = NcPolynomial(d, terms)
        polynomials[u] = poly
        norms[u] = sum(
            (a * b * _ip(s, v, w) for v, a in poly.terms.items() for w, b in poly.terms.items()),
            Fraction(0),
        )
    return MonicFamily(d, n, polynomials, norms)
