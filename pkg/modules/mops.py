"""
MOPS モジュール
半ノルム退化を許す Gram-Schmidt、MOPS 存在判定、漸化式係数の抽出
"""

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from .errors import DegreeBoundError, InvalidStateError, NotOrthogonalError
from .logger import get_logger
from .ncpoly import NcPolynomial, Word, enumerate_words, level_words, linear_combination
from .state import StateHandle, inner, seminorm_sq

logger = get_logger(__name__)

BKey = Tuple[int, Word, Word]


@dataclass(frozen=True)
class MonicFamily:
    """モニック多項式族 {P_u}（|u| ≤ degree）と二乗半ノルム"""

    d: int
    degree: int
    polynomials: Mapping[Word, NcPolynomial]
    norms_sq: Mapping[Word, Fraction]

    def __post_init__(self):
        expected = enumerate_words(self.d, self.degree)
        if set(self.polynomials) != set(expected):
            raise InvalidStateError(f"多項式族のワード集合が長さ {self.degree} 以下の全ワードと一致しません")
        for word in expected:
            if not self.polynomials[word].is_monic_in(word):
                raise InvalidStateError(f"P_{word} がモニックではありません: {self.polynomials[word]}")
        object.__setattr__(self, "polynomials", MappingProxyType({w: self.polynomials[w] for w in expected}))
        object.__setattr__(self, "norms_sq", MappingProxyType({w: Fraction(self.norms_sq[w]) for w in expected}))

    @classmethod
    def from_polynomials(cls, s: StateHandle, degree: int, polynomials: Mapping[Word, NcPolynomial]) -> "MonicFamily":
        """多項式だけから半ノルムを計算して族を作る"""
        norms = {word: seminorm_sq(s, poly) for word, poly in polynomials.items()}
        return cls(s.d, degree, polynomials, norms)

    def __getitem__(self, word: Word) -> NcPolynomial:
        return self.polynomials[word]

    def __iter__(self) -> Iterator[Word]:
        return iter(self.polynomials)

    def words(self, length: Optional[int] = None) -> List[Word]:
        if length is None:
            return list(self.polynomials)
        return [w for w in self.polynomials if len(w) == length]

    def norm_sq(self, word: Word) -> Fraction:
        return self.norms_sq[word]


@dataclass(frozen=True)
class OrthogonalityVerdict:
    """has_mops / check_relation0 / check_relation1 の結果"""

    ok: bool
    degree: int
    witness: Optional[Tuple[Word, Word]] = None
    # ⟨P_u, P_w⟩、または恒等式の左辺 − 右辺
    value: Optional[Fraction] = None

    def describe(self) -> str:
        if self.ok:
            return f"次数 {self.degree} まで直交"
        u, w = self.witness
        return f"({u or '∅'}, {w or '∅'}) で不成立, 値 {self.value}"


@dataclass(frozen=True)
class RecursionCoefficients:
    """漸化式 x_i P_u = P_(i,u) + Σ B_{i,w,u} P_w + δ_{i,u(1)} C_u P_{u'} の係数"""

    d: int
    depth: int
    C: Mapping[Word, Fraction]
    B: Mapping[BKey, Fraction]

    def kernel_weight(self, word: Word) -> Fraction:
        """∏_j C_{u_j}（接尾辞積）"""
        weight = Fraction(1)
        for suffix in word.suffixes():
            weight *= self.C[suffix]
        return weight

    def invariant_violation(self) -> Optional[str]:
        """C ≥ 0 と重み付き対称性を確認し、最初の違反を文字列で返す"""
        for word, value in self.C.items():
            if value < 0:
                return f"C_{word} = {value} < 0"
        for (i, s, u), value in self.B.items():
            if s < u:
                continue
            lhs = value * self.kernel_weight(s)
            rhs = self.B[(i, u, s)] * self.kernel_weight(u)
            if lhs != rhs:
                return f"B_({i},{s},{u})·K_{s} = {lhs} ≠ {rhs} = B_({i},{u},{s})·K_{u}"
        return None


def _require(s: StateHandle, needed: int, what: str):
    if needed > s.bound:
        raise DegreeBoundError(f"{what}: 必要な次数 {needed} が上限 {s.bound} を超えています")


def gram_schmidt(s: StateHandle, n: int) -> MonicFamily:
    """
    Gram-Schmidt 関係式で P_u を次数・辞書式順に構成する。

    射影は |v| < |u| かつ ‖P_v‖ ≠ 0 の P_v にだけ取り、同じ次数の中では直交化しない。
    """
    _require(s, 2 * n, "gram_schmidt")
    d = s.d
    polynomials: Dict[Word, NcPolynomial] = {}
    norms: Dict[Word, Fraction] = {}
    lower: List[Tuple[NcPolynomial, Fraction]] = []

    for m in range(n + 1):
        level: List[Tuple[NcPolynomial, Fraction]] = []
        for u in level_words(d, m):
            x_u = NcPolynomial.monomial(u)
            pairs = [(Fraction(1), x_u)]
            pairs.extend((-inner(s, x_u, p_v) / norm_v, p_v) for p_v, norm_v in lower)
            p_u = linear_combination(d, pairs)
            norm_u = seminorm_sq(s, p_u)
            polynomials[u] = p_u
            norms[u] = norm_u
            if norm_u != 0:
                level.append((p_u, norm_u))
        degenerate = len(level_words(d, m)) - len(level)
        if degenerate:
            logger.debug(f"次数 {m}: 半ノルム 0 の多項式が {degenerate} 個")
        lower.extend(level)

    return MonicFamily(d, n, polynomials, norms)


def _pairs(d: int, m: int) -> Iterator[Tuple[Word, Word]]:
    words = level_words(d, m)
    for a, u in enumerate(words):
        for w in words[a + 1:]:
            yield u, w


def has_mops(s: StateHandle, n: int) -> OrthogonalityVerdict:
    """Gram-Schmidt 族が同次数内でも直交するか（= MOPS が存在するか）"""
    family = gram_schmidt(s, n)
    for m in range(1, n + 1):
        for u, w in _pairs(s.d, m):
            value = inner(s, family[u], family[w])
            if value != 0:
                logger.debug(f"has_mops: 次数 {m} で ({u}, {w}) が非直交, 内積 {value}")
                return OrthogonalityVerdict(False, m, (u, w), value)
    return OrthogonalityVerdict(True, n)


def relation0_terms(s: StateHandle, family: MonicFamily, u: Word, w: Word) -> Fraction:
    """Σ_{|v|<n, ‖P_v‖≠0} ⟨x_u, P_v⟩⟨P_v, x_w⟩ / ⟨P_v, P_v⟩"""
    x_u = NcPolynomial.monomial(u)
    x_w = NcPolynomial.monomial(w)
    total = Fraction(0)
    for v in enumerate_words(s.d, len(u) - 1):
        norm_v = family.norm_sq(v)
        if norm_v == 0:
            continue
        p_v = family[v]
        total += inner(s, x_u, p_v) * inner(s, p_v, x_w) / norm_v
    return total


def check_relation0(s: StateHandle, n: int) -> OrthogonalityVerdict:
    """偶数次の非対称モーメントが他のモーメントで決まるという恒等式を直接検証"""
    family = gram_schmidt(s, n)
    for m in range(1, n + 1):
        for u, w in _pairs(s.d, m):
            lhs = s.moment(Word(u.letters[::-1] + w.letters, s.d))
            residual = lhs - relation0_terms(s, family, u, w)
            if residual != 0:
                return OrthogonalityVerdict(False, m, (u, w), residual)
    return OrthogonalityVerdict(True, n)


def find_nonorthogonal_pair(s: StateHandle, family: MonicFamily, n: Optional[int] = None) -> Optional[Tuple[Word, Word, Fraction]]:
    """族の全ペアを調べ、最初の非直交ペアを返す"""
    words = enumerate_words(s.d, family.degree if n is None else n)
    for a, u in enumerate(words):
        for w in words[a + 1:]:
            value = inner(s, family[u], family[w])
            if value != 0:
                return u, w, value
    return None


def null_words(family: MonicFamily) -> List[Word]:
    """‖P_u‖ = 0 のワード"""
    return [word for word in family if family.norm_sq(word) == 0]


def extract_recursion(s: StateHandle, family: MonicFamily, n: Optional[int] = None) -> RecursionCoefficients:
    """x_i P_u を {P_v} で展開し、B と C を読み取る"""
    n = family.degree if n is None else n
    if n > family.degree:
        raise DegreeBoundError(f"深さ {n} が多項式族の次数 {family.degree} を超えています")
    _require(s, 2 * n, "extract_recursion")

    offending = find_nonorthogonal_pair(s, family, n)
    if offending is not None:
        u, w, value = offending
        raise NotOrthogonalError((u, w), value)

    d = s.d
    B: Dict[BKey, Fraction] = {}
    C: Dict[Word, Fraction] = {}

    for k in range(n):
        level = level_words(d, k)
        lower = enumerate_words(d, k - 1) if k else []
        for u in level:
            for i in range(1, d + 1):
                xi_pu = NcPolynomial.variable(d, i) * family[u]
                for w in level:
                    norm_w = family.norm_sq(w)
                    B[(i, w, u)] = inner(s, family[w], xi_pu) / norm_w if norm_w else Fraction(0)
                for v in lower:
                    if family.norm_sq(v) == 0 or (k and i == u.first and v == u.tail):
                        continue
                    value = inner(s, family[v], xi_pu)
                    if value != 0:
                        raise NotOrthogonalError(
                            (v, u), value, f"x_{i} P_{u} の P_{v or '∅'} 成分が L² で消えません"
                        )

    for k in range(1, n + 1):
        for u in level_words(d, k):
            denominator = family.norm_sq(u.tail)
            C[u] = family.norm_sq(u) / denominator if denominator else Fraction(0)

    coeffs = RecursionCoefficients(d, n, C, B)
    violation = coeffs.invariant_violation()
    if violation:
        raise InvalidStateError(f"漸化式係数が条件を満たしません: {violation}", violation)
    logger.debug(f"漸化式係数を抽出: 深さ {n}, B {len(B)} 個, C {len(C)} 個")
    return coeffs


def recursion_residual(family: MonicFamily, coeffs: RecursionCoefficients, i: int, u: Word) -> NcPolynomial:
    """x_i P_u − P_(i,u) − Σ_w B_{i,w,u} P_w − δ_{i,u(1)} C_u P_{u'}"""
    d = family.d
    pairs = [
        (Fraction(1), NcPolynomial.variable(d, i) * family[u]),
        (Fraction(-1), family[u.prepend(i)]),
    ]
    pairs.extend((-coeffs.B[(i, w, u)], family[w]) for w in level_words(d, len(u)))
    if len(u) and u.first == i:
        pairs.append((-coeffs.C[u], family[u.tail]))
    return linear_combination(d, pairs)


def verify_recursion(family: MonicFamily, coeffs: RecursionCoefficients, s: StateHandle) -> bool:
    """漸化式の各行を多項式として組み立て、差が L²(φ) で 0 か確認"""
    if family.degree < coeffs.depth:
        logger.warning(f"多項式族の次数 {family.degree} が係数の深さ {coeffs.depth} より小さい")
        return False
    for k in range(coeffs.depth):
        for u in level_words(family.d, k):
            for i in range(1, family.d + 1):
                residual = recursion_residual(family, coeffs, i, u)
                if seminorm_sq(s, residual) != 0:
                    logger.debug(f"漸化式が x_{i} P_{u or '∅'} で不成立")
                    return False
    return True
