"""
Fock空間モジュール
切断された変形フルFock空間: 核、生成・消滅・対角作用素、Fock状態、
MOPS 状態からの Fock データ抽出
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

from .errors import AlphabetMismatchError, DegreeBoundError, InvalidStateError, NotOrthogonalError
from .logger import get_logger
from .mops import MonicFamily, RecursionCoefficients, find_nonorthogonal_pair
from .ncpoly import NcPolynomial, Word, enumerate_words, level_words, linear_combination
from .state import StateHandle, inner

logger = get_logger(__name__)

LevelMatrix = Tuple[Tuple[Fraction, ...], ...]


@lru_cache(maxsize=None)
def _level_index(d: int, k: int) -> Dict[Word, int]:
    return {word: position for position, word in enumerate(level_words(d, k))}


def _freeze(rows: Sequence[Sequence]) -> LevelMatrix:
    return tuple(tuple(Fraction(entry) for entry in row) for row in rows)


@dataclass(frozen=True)
class FockData:
    """対角重み C^(k)（1 ≤ k ≤ K）と相互作用行列 T_i^(k)（0 ≤ k ≤ K）"""

    d: int
    depth: int
    C: Mapping[Word, Fraction]
    T: Mapping[int, Tuple[LevelMatrix, ...]]

    def __post_init__(self):
        if self.d < 1 or self.depth < 0:
            raise InvalidStateError(f"d ≥ 1, depth ≥ 0 が必要です: d={self.d}, depth={self.depth}")
        weights = {}
        for k in range(1, self.depth + 1):
            for word in level_words(self.d, k):
                if word not in self.C:
                    raise InvalidStateError(f"C_{word} がありません")
                weights[word] = Fraction(self.C[word])
        extra = [w for w in self.C if not 1 <= len(w) <= self.depth]
        if extra:
            raise InvalidStateError(f"深さの範囲外の C があります: '{extra[0]}'")
        matrices = {}
        for i in range(1, self.d + 1):
            if i not in self.T or len(self.T[i]) != self.depth + 1:
                raise InvalidStateError(f"T_{i} は深さ 0..{self.depth} の行列が必要です")
            levels = []
            for k, matrix in enumerate(self.T[i]):
                size = self.d ** k
                if len(matrix) != size or any(len(row) != size for row in matrix):
                    raise InvalidStateError(f"T_{i}^({k}) は {size}×{size} 行列である必要があります")
                levels.append(_freeze(matrix))
            matrices[i] = tuple(levels)
        object.__setattr__(self, "C", MappingProxyType(weights))
        object.__setattr__(self, "T", MappingProxyType(matrices))

    def entry(self, i: int, w: Word, u: Word) -> Fraction:
        """(T_i^(k))_{w,u}: T_i e_u の e_w 成分"""
        index = _level_index(self.d, len(u))
        return self.T[i][len(u)][index[w]][index[u]]


class FockVector:
    """F_alg(H) の元。ワード u ↔ e_{u(1)}⊗…⊗e_{u(k)}、∅ ↔ Ω。"""

    __slots__ = ("_d", "_coeffs")

    def __init__(self, d: int, coeffs: Optional[Mapping[Word, Fraction]] = None):
        self._d = d
        self._coeffs = {w: Fraction(c) for w, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def vacuum(cls, d: int) -> "FockVector":
        return cls(d, {Word.empty(d): Fraction(1)})

    @classmethod
    def basis(cls, word: Word) -> "FockVector":
        return cls(word.d, {word: Fraction(1)})

    @property
    def d(self) -> int:
        return self._d

    @property
    def depth(self) -> Optional[int]:
        """台の最大レベル（零ベクトルは None）"""
        return max((len(w) for w in self._coeffs), default=None)

    def coefficient(self, word: Word) -> Fraction:
        return self._coeffs.get(word, Fraction(0))

    def items(self) -> List[Tuple[Word, Fraction]]:
        return sorted(self._coeffs.items())

    def is_zero(self) -> bool:
        return not self._coeffs

    def __add__(self, other: "FockVector") -> "FockVector":
        result = dict(self._coeffs)
        for word, coeff in other._coeffs.items():
            result[word] = result.get(word, Fraction(0)) + coeff
        return FockVector(self._d, result)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "FockVector":
        scalar = Fraction(scalar)
        return FockVector(self._d, {w: scalar * c for w, c in self._coeffs.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self._d == other._d and self._coeffs == other._coeffs

    def __repr__(self) -> str:
        body = ", ".join(f"{str(w) or 'Ω'}: {c}" for w, c in self.items())
        return f"FockVector({{{body}}})"


def _check_depth(level: Optional[int], limit: int, what: str):
    if level is not None and level > limit:
        raise DegreeBoundError(f"{what}: レベル {level} が上限 {limit} を超えています")


def kernel_coeff(data: FockData, u: Word) -> Fraction:
    """K_{C,u} = ∏_j C_{u_j}（全接尾辞の積）"""
    _check_depth(len(u), data.depth, "kernel_coeff")
    weight = Fraction(1)
    for suffix in u.suffixes():
        weight *= data.C[suffix]
        if weight == 0:
            break
    return weight


def kernel_diagonal(data: FockData, k: int) -> List[Fraction]:
    """レベル k の K_C の対角成分（辞書式順）"""
    return [kernel_coeff(data, u) for u in level_words(data.d, k)]


def c_inner(data: FockData, xi: FockVector, eta: FockVector) -> Fraction:
    """⟨ξ, η⟩_C = ⟨ξ, K_C η⟩"""
    _check_depth(xi.depth, data.depth, "c_inner")
    _check_depth(eta.depth, data.depth, "c_inner")
    total = Fraction(0)
    for word, coeff in xi.items():
        other = eta.coefficient(word)
        if other:
            total += coeff * other * kernel_coeff(data, word)
    return total


def apply_creation(i: int, v: FockVector, depth: Optional[int] = None) -> FockVector:
    """a_i⁺: 先頭に文字 i を付ける"""
    if depth is not None:
        _check_depth(v.depth, depth - 1, "apply_creation")
    return FockVector(v.d, {word.prepend(i): coeff for word, coeff in v.items()})


def apply_annihilation_tilde(data: FockData, i: int, v: FockVector) -> FockVector:
    """ã_i⁻ = a_i⁻ C: e_u ↦ C_u δ_{i,u(1)} e_{u'}、Ω ↦ 0"""
    _check_depth(v.depth, data.depth, "apply_annihilation_tilde")
    result: Dict[Word, Fraction] = {}
    for word, coeff in v.items():
        if len(word) and word.first == i:
            result[word.tail] = result.get(word.tail, Fraction(0)) + data.C[word] * coeff
    return FockVector(v.d, result)


def apply_T(data: FockData, i: int, v: FockVector) -> FockVector:
    """T_i: レベルごとに行列 T_i^(k) で作用"""
    _check_depth(v.depth, data.depth, "apply_T")
    result: Dict[Word, Fraction] = {}
    for u, coeff in v.items():
        column = _level_index(data.d, len(u))[u]
        matrix = data.T[i][len(u)]
        for w, row in _level_index(data.d, len(u)).items():
            entry = matrix[row][column]
            if entry:
                result[w] = result.get(w, Fraction(0)) + entry * coeff
    return FockVector(v.d, result)


def apply_X(data: FockData, i: int, v: FockVector) -> FockVector:
    """X_i = a_i⁺ + T_i + ã_i⁻"""
    _check_depth(v.depth, data.depth - 1, "apply_X")
    return apply_creation(i, v) + apply_T(data, i, v) + apply_annihilation_tilde(data, i, v)


def _step_X(data: FockData, i: int, v: FockVector, cap: int) -> FockVector:
    """X_i を作用させ、レベル cap を超える成分は捨てる（Ω に戻れない成分）"""
    result: Dict[Word, Fraction] = {}
    for u, coeff in v.items():
        k = len(u)
        if k + 1 <= cap:
            up = u.prepend(i)
            result[up] = result.get(up, Fraction(0)) + coeff
        if k <= cap:
            column = _level_index(data.d, k)[u]
            matrix = data.T[i][k]
            for w, row in _level_index(data.d, k).items():
                entry = matrix[row][column]
                if entry:
                    result[w] = result.get(w, Fraction(0)) + entry * coeff
        if k and u.first == i and k - 1 <= cap:
            weight = data.C[u]
            if weight:
                result[u.tail] = result.get(u.tail, Fraction(0)) + weight * coeff
    return FockVector(v.d, result)


def fock_moment(data: FockData, u: Word) -> Fraction:
    """φ(x_u) = ⟨Ω, X_{u(1)}⋯X_{u(k)} Ω⟩_C（|u| ≤ 2K+1）"""
    if len(u) > 2 * data.depth + 1:
        raise DegreeBoundError(
            f"次数 {len(u)} のモーメントには深さ {len(u) // 2} 以上が必要です"
            f"（現在 {data.depth}）"
        )
    vector = FockVector.vacuum(data.d)
    letters = u.letters
    for position in range(len(letters) - 1, -1, -1):
        vector = _step_X(data, letters[position], vector, cap=position)
        if vector.is_zero():
            return Fraction(0)
    return vector.coefficient(Word.empty(data.d))


class FockState:
    """FockData で定まる状態（StateHandle、bound = 2K+1）"""

    def __init__(self, data: FockData):
        self.data = data
        self.d = data.d
        self._cache: Dict[Word, Fraction] = {}

    @property
    def bound(self) -> int:
        return 2 * self.data.depth + 1

    def moment(self, word: Word) -> Fraction:
        if word.d != self.d:
            raise AlphabetMismatchError(f"d={word.d} のワードを d={self.d} のFock状態で評価できません")
        if len(word) > self.bound:
            raise DegreeBoundError(f"次数 {len(word)} がFock状態の上限 {self.bound} を超えています")
        value = self._cache.get(word)
        if value is None:
            value = fock_moment(self.data, word)
            self._cache[word] = value
        return value


class FockViolation(Enum):
    """Fockデータの条件違反の種類"""

    NEGATIVE_C = "negative C"
    TRANSPOSE = "transpose condition"
    NOT_SYMMETRIC = "X not symmetric"


@dataclass(frozen=True)
class FockReport:
    """validate_fock_data の結果"""

    ok: bool
    violation: Optional[FockViolation] = None
    letter: Optional[int] = None
    level: Optional[int] = None
    entry: Optional[Tuple[Word, Word]] = None
    message: str = "ok"


def validate_fock_data(data: FockData) -> FockReport:
    """C ≥ 0、転置条件、X_i の対称性を厳密に検証"""
    for word, weight in data.C.items():
        if weight < 0:
            return FockReport(False, FockViolation.NEGATIVE_C, entry=(word, word), level=len(word),
                              message=f"negative C: C_{word} = {weight}")

    for k in range(data.depth + 1):
        words = level_words(data.d, k)
        weights = kernel_diagonal(data, k)
        for i in range(1, data.d + 1):
            matrix = data.T[i][k]
            for a in range(len(words)):
                for b in range(a + 1, len(words)):
                    if weights[a] * matrix[a][b] != weights[b] * matrix[b][a]:
                        return FockReport(
                            False, FockViolation.TRANSPOSE, i, k, (words[a], words[b]),
                            f"(T_{i}^({k}))ᵗ K_C ≠ K_C T_{i}^({k}) at ({words[a] or '∅'}, {words[b] or '∅'})",
                        )

    if data.depth >= 1:
        basis = [FockVector.basis(w) for w in enumerate_words(data.d, data.depth - 1)]
        for i in range(1, data.d + 1):
            images = [apply_X(data, i, vector) for vector in basis]
            for a, xi in enumerate(basis):
                for b, eta in enumerate(basis):
                    if c_inner(data, images[a], eta) != c_inner(data, xi, images[b]):
                        u, w = xi.items()[0][0], eta.items()[0][0]
                        return FockReport(False, FockViolation.NOT_SYMMETRIC, i, len(u), (u, w),
                                          f"X_{i} が ({u or '∅'}, {w or '∅'}) で対称ではありません")
    return FockReport(True)


def kernel_subspace(data: FockData, k: int) -> Set[Word]:
    """ker K_C を張る長さ k の基底ワード"""
    _check_depth(k, data.depth, "kernel_subspace")
    return {u for u in level_words(data.d, k) if kernel_coeff(data, u) == 0}


def evaluate_on_vacuum(data: FockData, p: NcPolynomial) -> FockVector:
    """P(X_1, …, X_d) Ω"""
    _check_depth(p.degree, data.depth, "evaluate_on_vacuum")
    total = FockVector(data.d)
    for word, coeff in p.items():
        vector = FockVector.vacuum(data.d)
        for letter in reversed(word.letters):
            vector = apply_X(data, letter, vector)
        total = total + coeff * vector
    return total


def mops_vectors(data: FockData, n: int) -> MonicFamily:
    """P_u(X)Ω = e_u を満たすモニック多項式を漸化式で構成する"""
    _check_depth(n, data.depth, "mops_vectors")
    d = data.d
    polynomials: Dict[Word, NcPolynomial] = {Word.empty(d): NcPolynomial.constant(d, 1)}
    for k in range(n):
        for u in level_words(d, k):
            for i in range(1, d + 1):
                pairs = [(Fraction(1), NcPolynomial.variable(d, i) * polynomials[u])]
                pairs.extend((-data.entry(i, w, u), polynomials[w]) for w in level_words(d, k))
                if k and u.first == i:
                    pairs.append((-data.C[u], polynomials[u.tail]))
                polynomials[u.prepend(i)] = linear_combination(d, pairs)

    for word, poly in polynomials.items():
        if evaluate_on_vacuum(data, poly) != FockVector.basis(word):
            raise InvalidStateError(f"P_{word}(X)Ω ≠ e_{word}")
    norms = {word: kernel_coeff(data, word) for word in polynomials}
    return MonicFamily(d, n, polynomials, norms)


def extract_fock_data(s: StateHandle, family: MonicFamily, depth: int) -> FockData:
    """MOPS 状態から C^(k) と T_i^(k) を再帰的に定める"""
    if s.bound < 2 * depth + 1:
        raise DegreeBoundError(f"深さ {depth} の抽出には次数 {2 * depth + 1} までのモーメントが必要です（上限 {s.bound}）")
    if family.degree < depth:
        raise DegreeBoundError(f"多項式族の次数 {family.degree} が深さ {depth} より小さい")
    offending = find_nonorthogonal_pair(s, family, depth)
    if offending is not None:
        u, w, value = offending
        raise NotOrthogonalError((u, w), value)

    d = s.d
    C: Dict[Word, Fraction] = {}
    weights: Dict[Word, Fraction] = {Word.empty(d): Fraction(1)}
    for k in range(1, depth + 1):
        for u in level_words(d, k):
            denominator = weights[u.tail]
            C[u] = family.norm_sq(u) / denominator if denominator else Fraction(0)
            weights[u] = C[u] * denominator

    T: Dict[int, List[List[List[Fraction]]]] = {i: [] for i in range(1, d + 1)}
    for k in range(depth + 1):
        words = level_words(d, k)
        for i in range(1, d + 1):
            columns = [NcPolynomial.variable(d, i) * family[v] for v in words]
            matrix = []
            for u in words:
                weight = weights[u]
                matrix.append([inner(s, family[u], column) / weight if weight else Fraction(0) for column in columns])
            T[i].append(matrix)
        degenerate = sum(1 for u in words if weights[u] == 0)
        if degenerate:
            logger.debug(f"レベル {k}: K_C = 0 のワード {degenerate} 個（T の該当行を 0 とする）")

    data = FockData(d, depth, C, {i: tuple(levels) for i, levels in T.items()})
    report = validate_fock_data(data)
    if not report.ok:
        raise InvalidStateError(f"抽出した Fock データが不正です: {report.message}", report)
    return data


def data_from_recursion(coeffs: RecursionCoefficients) -> FockData:
    """B_{i,w,u} = (T_i)_{w,u}, C_u = C^(k) の対角成分。最上位の T は 0（次数 2n までは一致）。"""
    d, n = coeffs.d, coeffs.depth
    T = {}
    for i in range(1, d + 1):
        levels = []
        for k in range(n + 1):
            words = level_words(d, k)
            if k < n:
                levels.append([[coeffs.B[(i, w, u)] for u in words] for w in words])
            else:
                levels.append([[Fraction(0)] * len(words) for _ in words])
        T[i] = tuple(levels)
    return FockData(d, n, dict(coeffs.C), T)


def recursion_from_data(data: FockData) -> RecursionCoefficients:
    """Fock データの行列要素を漸化式係数として読む（深さ K、T^(K) は使わない）"""
    d, K = data.d, data.depth
    B = {
        (i, w, u): data.entry(i, w, u)
        for k in range(K)
        for u in level_words(d, k)
        for w in level_words(d, k)
        for i in range(1, d + 1)
    }
    return RecursionCoefficients(d, K, dict(data.C), B)
