"""
状態モジュール
切断モーメント表としての状態、内積・半ノルム、厳密な正値性判定
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Protocol, Sequence

from .errors import AlphabetMismatchError, DegreeBoundError, InvalidStateError
from .linalg import Matrix, ldl_psd, quadratic_form
from .logger import get_logger
from .ncpoly import NcPolynomial, Word, enumerate_words, multiply, reverse, star

logger = get_logger(__name__)


class StateHandle(Protocol):
    """モーメント評価器（表またはFock空間）。bound を超える問い合わせはエラー。"""

    d: int

    @property
    def bound(self) -> int:
        ...

    def moment(self, word: Word) -> Fraction:
        ...


@dataclass(frozen=True)
class MomentTable:
    """|u| ≤ max_degree のすべてのワードのモーメント φ(x_u)"""

    d: int
    max_degree: int
    moments: Mapping[Word, Fraction]

    def __post_init__(self):
        if self.max_degree < 0 or self.max_degree % 2:
            raise InvalidStateError(f"max_degree は 0 以上の偶数である必要があります: {self.max_degree}")
        table: Dict[Word, Fraction] = {}
        for word, value in self.moments.items():
            if word.d != self.d:
                raise AlphabetMismatchError(f"ワード {word} の d={word.d} が表の d={self.d} と異なります")
            if len(word) > self.max_degree:
                raise InvalidStateError(f"ワード {word} の長さが max_degree={self.max_degree} を超えています")
            table[word] = Fraction(value)
        missing = [w for w in enumerate_words(self.d, self.max_degree) if w not in table]
        if missing:
            raise InvalidStateError(f"モーメントが不足しています: 最初の欠落ワード '{missing[0]}'")
        object.__setattr__(self, "moments", MappingProxyType(dict(sorted(table.items()))))

    @classmethod
    def from_mapping(cls, d: int, max_degree: int, moments: Mapping[Word, Fraction]) -> "MomentTable":
        """u が無くても reverse(u) があれば補完して表を作る"""
        table = dict(moments)
        for word in enumerate_words(d, max_degree):
            if word not in table and reverse(word) in table:
                table[word] = table[reverse(word)]
        return cls(d, max_degree, table)

    @property
    def bound(self) -> int:
        return self.max_degree

    def moment(self, word: Word) -> Fraction:
        if word.d != self.d:
            raise AlphabetMismatchError(f"d={word.d} のワードを d={self.d} の表で評価できません")
        if len(word) > self.max_degree:
            raise DegreeBoundError(f"次数 {len(word)} が表の上限 {self.max_degree} を超えています")
        return self.moments[word]


def _require(s: StateHandle, needed: Optional[int], what: str):
    if needed is not None and needed > s.bound:
        raise DegreeBoundError(f"{what}: 必要な次数 {needed} が上限 {s.bound} を超えています")


def apply(s: StateHandle, p: NcPolynomial) -> Fraction:
    """φ(P) = Σ coeff(w)·φ(x_w)"""
    _require(s, p.degree, "apply")
    return sum((coeff * s.moment(word) for word, coeff in p.terms.items()), Fraction(0))


def inner(s: StateHandle, p: NcPolynomial, q: NcPolynomial) -> Fraction:
    """⟨P, Q⟩ = φ(P* Q)"""
    if p.is_zero() or q.is_zero():
        return Fraction(0)
    _require(s, p.degree + q.degree, "inner")
    return apply(s, multiply(star(p), q))


def seminorm_sq(s: StateHandle, p: NcPolynomial) -> Fraction:
    """‖P‖² = φ(P* P)"""
    return inner(s, p, p)


def gram_matrix(s: StateHandle, n: int, index: Optional[Sequence[Word]] = None) -> Matrix:
    """(v, w) 成分が ⟨x_v, x_w⟩ の行列（既定の添字は enumerate_words(d, n)）"""
    _require(s, 2 * n, "gram_matrix")
    words = list(index) if index is not None else enumerate_words(s.d, n)
    return [[s.moment(Word(v.letters[::-1] + w.letters, s.d)) for w in words] for v in words]


class StateViolation(Enum):
    """状態の条件違反の種類"""

    NOT_UNITAL = "not unital"
    NOT_HERMITIAN = "not hermitian"
    NOT_POSITIVE = "not positive"


@dataclass(frozen=True)
class StateReport:
    """check_state の結果"""

    ok: bool
    violation: Optional[StateViolation] = None
    word: Optional[Word] = None
    # 負の二乗半ノルムを持つ多項式（正値性違反の証明書）
    certificate: Optional[NcPolynomial] = None
    value: Optional[Fraction] = None
    pivots: List[Fraction] = field(default_factory=list)

    @property
    def message(self) -> str:
        if self.ok:
            return "ok"
        if self.violation is StateViolation.NOT_UNITAL:
            return f"not unital: φ(1) = {self.value}"
        if self.violation is StateViolation.NOT_HERMITIAN:
            return f"not hermitian: φ(x_{self.word}) ≠ φ(x_{reverse(self.word)})"
        return f"not positive: ‖{self.certificate}‖² = {self.value} < 0"


def check_state(t: MomentTable) -> StateReport:
    """単位的・*-整合・正値の3条件を厳密に検証"""
    unit = t.moment(Word.empty(t.d))
    if unit != 1:
        return StateReport(False, StateViolation.NOT_UNITAL, Word.empty(t.d), value=unit)

    for word, value in t.moments.items():
        if value != t.moments[reverse(word)]:
            return StateReport(False, StateViolation.NOT_HERMITIAN, word, value=value)

    # 最大の Gram 行列が半正定値なら主小行列もすべて半正定値
    n = t.max_degree // 2
    words = enumerate_words(t.d, n)
    gram = gram_matrix(t, n, words)
    result = ldl_psd(gram)
    if not result.psd:
        certificate = NcPolynomial(t.d, {w: c for w, c in zip(words, result.certificate)})
        value = quadratic_form(gram, result.certificate)
        logger.debug(f"正値性違反: 証明書 {certificate}, 値 {value}")
        return StateReport(False, StateViolation.NOT_POSITIVE, certificate=certificate, value=value,
                           pivots=result.pivots)
    return StateReport(True, pivots=result.pivots)


def is_faithful_up_to(s: StateHandle, n: int) -> bool:
    """m ≤ n のすべての Gram 行列が正定値か"""
    return ldl_psd(gram_matrix(s, n)).definite


def restrict(s: StateHandle, max_degree: int) -> MomentTable:
    """任意の StateHandle を偶数次数までのモーメント表にする"""
    _require(s, max_degree, "restrict")
    return MomentTable(s.d, max_degree, {w: s.moment(w) for w in enumerate_words(s.d, max_degree)})
