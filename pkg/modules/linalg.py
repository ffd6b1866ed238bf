"""
厳密線形代数モジュール
有理数行列の Bareiss 行列式と、証明書付きの LDLᵀ 半正定値判定
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

Matrix = List[List[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(entry) for entry in row] for row in rows]


def is_symmetric(matrix: Sequence[Sequence[Fraction]]) -> bool:
    n = len(matrix)
    return all(matrix[i][j] == matrix[j][i] for i in range(n) for j in range(i + 1, n))


def bareiss_det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """分数を使わない Bareiss 消去による行列式（空行列は 1）"""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    m = to_matrix(matrix)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            factor = row_i[k]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) / prev
            row_i[k] = Fraction(0)
        prev = pivot
    return sign * m[n - 1][n - 1]


def minor(matrix: Sequence[Sequence[Fraction]], row: int, col: int) -> Matrix:
    return [
        [entry for j, entry in enumerate(line) if j != col]
        for i, line in enumerate(matrix)
        if i != row
    ]


def solve_nonsingular(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> List[Fraction]:
    """正則な連立方程式を Gauss-Jordan で解く"""
    n = len(matrix)
    aug = [list(map(Fraction, matrix[i])) + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot_row is None:
            raise ZeroDivisionError("特異行列です")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot = aug[col][col]
        aug[col] = [value / pivot for value in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def quadratic_form(matrix: Sequence[Sequence[Fraction]], vector: Sequence[Fraction]) -> Fraction:
    n = len(matrix)
    return sum(
        (vector[i] * matrix[i][j] * vector[j] for i in range(n) for j in range(n) if vector[i] and vector[j]),
        Fraction(0),
    )


@dataclass(frozen=True)
class LdlResult:
    """LDLᵀ 判定の結果"""

    psd: bool
    definite: bool
    pivots: List[Fraction] = field(default_factory=list)
    skipped: List[int] = field(default_factory=list)
    # xᵀ A x < 0 となるベクトル（psd=False のときのみ）
    certificate: Optional[List[Fraction]] = None


def ldl_psd(matrix: Sequence[Sequence[Fraction]]) -> LdlResult:
    """
    対称行列の半正定値性を LDLᵀ（対角ピボット）で厳密に判定する。

    ピボット 0 は残差の行・列がすべて 0 のときだけ読み飛ばす。
    負のピボット、または 0 ピボットに非零の残差があれば不定で、
    そのとき xᵀAx < 0 となる証明書ベクトルを返す。
    """
    original = to_matrix(matrix)
    if not is_symmetric(original):
        raise ValueError("LDLᵀ 判定には対称行列が必要です")
    n = len(original)
    work = to_matrix(matrix)
    pivots: List[Fraction] = []
    skipped: List[int] = []
    eliminated: List[int] = []

    for k in range(n):
        p = work[k][k]
        if p < 0:
            y = {k: Fraction(1)}
            return LdlResult(False, False, pivots, skipped, _lift_certificate(original, eliminated, k, y))
        if p == 0:
            j = next((j for j in range(k + 1, n) if work[k][j] != 0), None)
            if j is None:
                skipped.append(k)
                pivots.append(p)
                continue
            b = work[k][j]
            c = work[j][j]
            # (t e_k + e_j)ᵀ S (t e_k + e_j) = 2tb + c = -1
            y = {k: -(c + 1) / (2 * b), j: Fraction(1)}
            return LdlResult(False, False, pivots, skipped, _lift_certificate(original, eliminated, k, y))
        pivots.append(p)
        eliminated.append(k)
        row_k = work[k]
        for i in range(k + 1, n):
            factor = work[i][k] / p
            if factor == 0:
                continue
            row_i = work[i]
            for j in range(k + 1, n):
                row_i[j] -= factor * row_k[j]

    return LdlResult(True, not skipped, pivots, skipped, None)


def _lift_certificate(original: Matrix, eliminated: List[int], k: int, y: dict) -> List[Fraction]:
    """Schur 補行列上のベクトル y を元の座標へ戻す（xᵀAx = yᵀSy）"""
    n = len(original)
    x = [Fraction(0)] * n
    for index, value in y.items():
        x[index] = value
    if eliminated:
        rhs = [
            -sum((original[e][r] * value for r, value in y.items()), Fraction(0))
            for e in eliminated
        ]
        block = [[original[a][b] for b in eliminated] for a in eliminated]
        for e, value in zip(eliminated, solve_nonsingular(block, rhs)):
            x[e] = value
    return x
