"""
非可換多項式モジュール
ワード（多重添字）、有理数係数の非可換多項式、反転対合 * と演算
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import product
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from .errors import AlphabetMismatchError, FormatError

Scalar = Union[int, Fraction]


@total_ordering
@dataclass(frozen=True)
class Word:
    """アルファベット {1..d} 上の有限列（空列 ∅ を含む）"""

    letters: Tuple[int, ...]
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise FormatError(f"アルファベットサイズは 1 以上です: d={self.d}")
        for letter in self.letters:
            if not 1 <= letter <= self.d:
                raise FormatError(f"文字 {letter} が 1..{self.d} の範囲外です")

    @classmethod
    def empty(cls, d: int) -> "Word":
        return cls((), d)

    @classmethod
    def of(cls, d: int, *letters: int) -> "Word":
        return cls(tuple(letters), d)

    @classmethod
    def parse(cls, text: str, d: int) -> "Word":
        """ワード文字列を読む。d ≤ 9 なら "121"、それ以外はカンマ区切り。"""
        text = text.strip()
        if not text:
            return cls.empty(d)
        try:
            if d <= 9 and "," not in text:
                letters = tuple(int(ch) for ch in text)
            else:
                letters = tuple(int(part) for part in text.split(","))
        except ValueError as exc:
            raise FormatError(f"ワード文字列を解釈できません: {text!r}") from exc
        return cls(letters, d)

    def __str__(self) -> str:
        if self.d <= 9:
            return "".join(str(letter) for letter in self.letters)
        return ",".join(str(letter) for letter in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __lt__(self, other: "Word") -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    @property
    def first(self) -> int:
        return self.letters[0]

    @property
    def tail(self) -> "Word":
        """(u(2), …, u(k))"""
        return Word(self.letters[1:], self.d)

    def suffix(self, j: int) -> "Word":
        """u_j = (u(j), …, u(k))、j は 1 始まり"""
        return Word(self.letters[j - 1:], self.d)

    def suffixes(self) -> List["Word"]:
        """u_1, u_2, …, u_k（空でない接尾辞すべて）"""
        return [self.suffix(j) for j in range(1, len(self.letters) + 1)]

    def prepend(self, letter: int) -> "Word":
        return Word((letter,) + self.letters, self.d)

    def concat(self, other: "Word") -> "Word":
        return concat(self, other)

    def reverse(self) -> "Word":
        return reverse(self)


def concat(u: Word, v: Word) -> Word:
    if u.d != v.d:
        raise AlphabetMismatchError(f"d={u.d} と d={v.d} のワードは連結できません")
    return Word(u.letters + v.letters, u.d)


def reverse(u: Word) -> Word:
    return Word(u.letters[::-1], u.d)


def level_words(d: int, k: int) -> List[Word]:
    """長さちょうど k のワード（辞書式順）"""
    return [Word(letters, d) for letters in product(range(1, d + 1), repeat=k)]


def enumerate_words(d: int, n: int) -> List[Word]:
    """長さ n 以下のワードを次数・辞書式順で列挙"""
    if d < 1 or n < 0:
        raise ValueError(f"d ≥ 1, n ≥ 0 が必要です: d={d}, n={n}")
    words: List[Word] = []
    for k in range(n + 1):
        words.extend(level_words(d, k))
    return words


def count_words(d: int, n: int) -> int:
    """長さ n 以下のワード数 (d^{n+1} − 1)/(d − 1)"""
    if n < 0:
        return 0
    if d == 1:
        return n + 1
    return (d ** (n + 1) - 1) // (d - 1)


class NcPolynomial:
    """有理数係数の非可換多項式。係数 0 は保持しない不変値。"""

    __slots__ = ("_d", "_terms")

    def __init__(self, d: int, terms: Optional[Mapping[Word, Scalar]] = None):
        self._d = d
        pruned: Dict[Word, Fraction] = {}
        for word, coeff in (terms or {}).items():
            if word.d != d:
                raise AlphabetMismatchError(f"ワード {word} の d={word.d} が多項式の d={d} と異なります")
            value = Fraction(coeff)
            if value != 0:
                pruned[word] = value
        self._terms = pruned

    @classmethod
    def _from_clean(cls, d: int, terms: Dict[Word, Fraction]) -> "NcPolynomial":
        poly = cls.__new__(cls)
        poly._d = d
        poly._terms = {word: coeff for word, coeff in terms.items() if coeff != 0}
        return poly

    @classmethod
    def zero(cls, d: int) -> "NcPolynomial":
        return cls(d)

    @classmethod
    def constant(cls, d: int, value: Scalar) -> "NcPolynomial":
        return cls(d, {Word.empty(d): value})

    @classmethod
    def monomial(cls, word: Word, coeff: Scalar = 1) -> "NcPolynomial":
        return cls(word.d, {word: coeff})

    @classmethod
    def variable(cls, d: int, i: int) -> "NcPolynomial":
        return cls.monomial(Word.of(d, i))

    @property
    def d(self) -> int:
        return self._d

    @property
    def terms(self) -> Mapping[Word, Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> List[Tuple[Word, Fraction]]:
        """次数・辞書式順の (ワード, 係数) 列"""
        return sorted(self._terms.items())

    def coefficient(self, word: Word) -> Fraction:
        return self._terms.get(word, Fraction(0))

    @property
    def degree(self) -> Optional[int]:
        """最大の |w|。零多項式は None。"""
        return degree(self)

    def is_zero(self) -> bool:
        return not self._terms

    def leading_coefficient(self) -> Fraction:
        """最高次の項のうち deg-lex 最大のワードの係数（零多項式は 0）"""
        if not self._terms:
            return Fraction(0)
        return self._terms[max(self._terms)]

    def is_monic_in(self, word: Word) -> bool:
        """x_word + 低次項 の形かどうか"""
        if self.coefficient(word) != 1:
            return False
        return all(len(other) < len(word) for other in self._terms if other != word)

    def _check(self, other: "NcPolynomial"):
        if self._d != other._d:
            raise AlphabetMismatchError(f"d={self._d} と d={other._d} の多項式は演算できません")

    def __add__(self, other: "NcPolynomial") -> "NcPolynomial":
        return add(self, other)

    def __sub__(self, other: "NcPolynomial") -> "NcPolynomial":
        return add(self, scale(-1, other))

    def __neg__(self) -> "NcPolynomial":
        return scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, NcPolynomial):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return scale(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scale(other, self)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcPolynomial):
            return NotImplemented
        return self._d == other._d and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._d, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"NcPolynomial(d={self._d}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: List[str] = []
        for word, coeff in sorted(self._terms.items(), reverse=True):
            monomial = "".join(f"x{letter}" for letter in word)
            magnitude = abs(coeff)
            if not monomial:
                body = str(magnitude)
            elif magnitude == 1:
                body = monomial
            else:
                body = f"{magnitude}{monomial}"
            sign = "-" if coeff < 0 else "+"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def star(p: NcPolynomial) -> NcPolynomial:
    """対合 (x_u)^* = x_{u^op} の線形拡張"""
    return NcPolynomial._from_clean(p.d, {reverse(word): coeff for word, coeff in p.terms.items()})


def add(p: NcPolynomial, q: NcPolynomial) -> NcPolynomial:
    p._check(q)
    result = dict(p.terms)
    for word, coeff in q.terms.items():
        result[word] = result.get(word, Fraction(0)) + coeff
    return NcPolynomial._from_clean(p.d, result)


def scale(c: Scalar, p: NcPolynomial) -> NcPolynomial:
    c = Fraction(c)
    if c == 0:
        return NcPolynomial.zero(p.d)
    return NcPolynomial._from_clean(p.d, {word: c * coeff for word, coeff in p.terms.items()})


def multiply(p: NcPolynomial, q: NcPolynomial) -> NcPolynomial:
    """x_u · x_v = x_{(u,v)} の双線形拡張"""
    p._check(q)
    result: Dict[Word, Fraction] = {}
    for u, a in p.terms.items():
        for v, b in q.terms.items():
            word = Word(u.letters + v.letters, p.d)
            result[word] = result.get(word, Fraction(0)) + a * b
    return NcPolynomial._from_clean(p.d, result)


def degree(p: NcPolynomial) -> Optional[int]:
    if p.is_zero():
        return None
    return max(len(word) for word in p.terms)


def linear_combination(d: int, pairs: Iterable[Tuple[Scalar, NcPolynomial]]) -> NcPolynomial:
    """Σ c_k P_k をまとめて計算"""
    result: Dict[Word, Fraction] = {}
    for c, poly in pairs:
        if poly.d != d:
            raise AlphabetMismatchError(f"d={poly.d} の多項式を d={d} の和に加えられません")
        c = Fraction(c)
        if c == 0:
            continue
        for word, coeff in poly.terms.items():
            result[word] = result.get(word, Fraction(0)) + c * coeff
    return NcPolynomial._from_clean(d, result)
