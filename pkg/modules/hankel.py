"""
Hankel 行列式モジュール
多変数 Hankel 行列式 h_u, 𝔥_n, h_{v,u} と、行列式で表した直交多項式
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DegreeBoundError, InvalidStateError, NotFaithfulError
from .linalg import Matrix, bareiss_det, is_symmetric, minor
from .logger import get_logger
from .mops import MonicFamily, OrthogonalityVerdict
from .ncpoly import NcPolynomial, Word, count_words, enumerate_words, level_words
from .state import StateHandle

logger = get_logger(__name__)


@dataclass(frozen=True)
class HankelFrame:
    """A_u: 長さ n 未満の全ワードと u で添字付けた Gram 行列"""

    d: int
    target: Word
    index: Tuple[Word, ...]
    matrix: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not is_symmetric(self.matrix):
            raise InvalidStateError(f"A_{self.target} が対称ではありません（*-整合でない状態）")

    @property
    def dimension(self) -> int:
        return len(self.index)

    def rows(self) -> Matrix:
        return [list(row) for row in self.matrix]


def frame_dimension(d: int, n: int) -> int:
    """1 + d + … + d^{n−1} + 1"""
    return count_words(d, n - 1) + 1


def _ip(s: StateHandle, v: Word, w: Word) -> Fraction:
    return s.moment(Word(v.letters[::-1] + w.letters, s.d))


def _lower(s: StateHandle, n: int, lower: Optional[Sequence[Word]]) -> List[Word]:
    if lower is None:
        return enumerate_words(s.d, n - 1) if n > 0 else []
    return list(lower)


def build_frame(s: StateHandle, u: Word, lower: Optional[Sequence[Word]] = None) -> HankelFrame:
    """(v, w) 成分が ⟨x_v, x_w⟩ の行列 A_u（lower で次数両立な別順序を指定可）"""
    if 2 * len(u) > s.bound:
        raise DegreeBoundError(f"A_{u}: 必要な次数 {2 * len(u)} が上限 {s.bound} を超えています")
    index = tuple(_lower(s, len(u), lower)) + (u,)
    matrix = tuple(tuple(_ip(s, v, w) for w in index) for v in index)
    return HankelFrame(s.d, u, index, matrix)


def h(s: StateHandle, u: Word, lower: Optional[Sequence[Word]] = None) -> Fraction:
    """h_u = det A_u"""
    return bareiss_det(build_frame(s, u, lower).matrix)


def frak_h(s: StateHandle, n: int, lower: Optional[Sequence[Word]] = None) -> Fraction:
    """𝔥_n: A_u から u の行と列を除いた行列式（u に依存しない）"""
    words = _lower(s, n, lower)
    if words and 2 * (n - 1) > s.bound:
        raise DegreeBoundError(f"𝔥_{n}: 必要な次数 {2 * (n - 1)} が上限 {s.bound} を超えています")
    return bareiss_det([[_ip(s, v, w) for w in words] for v in words])


def h_pair(s: StateHandle, v: Word, u: Word, lower: Optional[Sequence[Word]] = None) -> Fraction:
    """h_{v,u}: A_u の u 行を ⟨x_v, x_w⟩ に置き換えた行列式"""
    frame = build_frame(s, u, lower)
    if len(v) + len(u) > s.bound:
        raise DegreeBoundError(f"h_({v},{u}): 必要な次数 {len(v) + len(u)} が上限 {s.bound} を超えています")
    rows = frame.rows()
    rows[-1] = [_ip(s, v, w) for w in frame.index]
    return bareiss_det(rows)


def det_M(s: StateHandle, u: Word, lower: Optional[Sequence[Word]] = None) -> NcPolynomial:
    """det M_u(x): 多項式行に沿った余因子展開 Σ_w cof(u, w)·x_w"""
    frame = build_frame(s, u, lower)
    rows = frame.rows()
    r = frame.dimension - 1
    terms: Dict[Word, Fraction] = {}
    for c, w in enumerate(frame.index):
        cofactor = bareiss_det(minor(rows, r, c))
        if (r + c) % 2:
            cofactor = -cofactor
        terms[w] = cofactor
    return NcPolynomial(s.d, terms)


def hankel_family(s: StateHandle, n: int) -> MonicFamily:
    """{det M_u / 𝔥_{|u|}}（忠実な状態でのみ定義される）"""
    normalizers = {0: Fraction(1)}
    for m in range(1, n + 1):
        value = frak_h(s, m)
        if value == 0:
            raise NotFaithfulError(m)
        normalizers[m] = value
    polynomials = {
        u: det_M(s, u) * (1 / normalizers[len(u)])
        for u in enumerate_words(s.d, n)
    }
    return MonicFamily.from_polynomials(s, n, polynomials)


class _Determinants:
    """check_relation1 用の行列式キャッシュ"""

    def __init__(self, s: StateHandle):
        self.s = s
        self._h: Dict[Word, Fraction] = {}
        self._frak: Dict[int, Fraction] = {}
        self._pair: Dict[Tuple[Word, Word], Fraction] = {}

    def h(self, v: Word) -> Fraction:
        if v not in self._h:
            self._h[v] = h(self.s, v)
        return self._h[v]

    def frak(self, n: int) -> Fraction:
        if n not in self._frak:
            self._frak[n] = frak_h(self.s, n)
        return self._frak[n]

    def pair(self, u: Word, v: Word) -> Fraction:
        key = (u, v)
        if key not in self._pair:
            self._pair[key] = h_pair(self.s, u, v)
        return self._pair[key]


def relation1_terms(s: StateHandle, u: Word, w: Word, cache: Optional[_Determinants] = None) -> Fraction:
    """Σ_{|v|<n, h_v≠0} h_{u,v} h_{w,v} / (h_v 𝔥_{|v|})"""
    cache = cache or _Determinants(s)
    total = Fraction(0)
    for v in enumerate_words(s.d, len(u) - 1):
        h_v = cache.h(v)
        if h_v == 0:
            continue
        total += cache.pair(u, v) * cache.pair(w, v) / (h_v * cache.frak(len(v)))
    return total


def check_relation1(s: StateHandle, n: int) -> OrthogonalityVerdict:
    """行列式だけで書いた恒等式を検証（忠実な状態が前提）"""
    if 2 * n > s.bound:
        raise DegreeBoundError(f"check_relation1: 必要な次数 {2 * n} が上限 {s.bound} を超えています")
    cache = _Determinants(s)
    for m in range(1, n + 1):
        if cache.frak(m) == 0:
            raise NotFaithfulError(m)
    for m in range(1, n + 1):
        words = level_words(s.d, m)
        for a, u in enumerate(words):
            for w in words[a + 1:]:
                residual = _ip(s, u, w) - relation1_terms(s, u, w, cache)
                if residual != 0:
                    logger.debug(f"check_relation1: 次数 {m} で ({u}, {w}) が不成立, 残差 {residual}")
                    return OrthogonalityVerdict(False, m, (u, w), residual)
    return OrthogonalityVerdict(True, n)
