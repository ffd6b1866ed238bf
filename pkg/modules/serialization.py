"""
JSON 入出力モジュール
モーメント表・Fockデータ・多項式族・漸化式係数の読み書き（数値はすべて "p/q"）
"""

import csv
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence

from .config import Config
from .errors import FormatError, NcmopsError
from .fock import FockData
from .mops import MonicFamily, RecursionCoefficients
from .ncpoly import NcPolynomial, Word, level_words
from .state import MomentTable


def format_rational(value) -> str:
    """既約分数 "p/q"（整数も "n/1"）"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(raw: Any) -> Fraction:
    if isinstance(raw, bool):
        raise FormatError(f"有理数ではありません: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if not isinstance(raw, str):
        raise FormatError(f"有理数は \"p/q\" 文字列で指定してください: {raw!r}")
    try:
        return Fraction(raw.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"有理数を解釈できません: {raw!r}") from exc


def _require_int(obj: Mapping, key: str) -> int:
    value = obj.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise FormatError(f"\"{key}\" は整数である必要があります: {value!r}")
    return value


def _require_map(obj: Mapping, key: str) -> Mapping:
    value = obj.get(key)
    if not isinstance(value, dict):
        raise FormatError(f"\"{key}\" はオブジェクトである必要があります")
    return value


def polynomial_to_json(p: NcPolynomial) -> Dict[str, str]:
    return {str(word): format_rational(coeff) for word, coeff in p.items()}


def polynomial_from_json(obj: Mapping[str, Any], d: int) -> NcPolynomial:
    return NcPolynomial(d, {Word.parse(key, d): parse_rational(value) for key, value in obj.items()})


def table_to_json(table: MomentTable) -> Dict[str, Any]:
    return {
        "d": table.d,
        "max_degree": table.max_degree,
        "moments": {str(word): format_rational(value) for word, value in table.moments.items()},
    }


def table_from_json(obj: Any) -> MomentTable:
    """逆順ワードがあれば u は省略可（from_mapping で補完）"""
    if not isinstance(obj, dict):
        raise FormatError("モーメント表はオブジェクトである必要があります")
    d = _require_int(obj, "d")
    max_degree = _require_int(obj, "max_degree")
    raw = _require_map(obj, "moments")
    moments = {Word.parse(key, d): parse_rational(value) for key, value in raw.items()}
    return MomentTable.from_mapping(d, max_degree, moments)


def fock_to_json(data: FockData) -> Dict[str, Any]:
    return {
        "d": data.d,
        "depth": data.depth,
        "C": {str(word): format_rational(value) for word, value in sorted(data.C.items())},
        "T": {
            str(i): {
                str(k): [[format_rational(entry) for entry in row] for row in matrix]
                for k, matrix in enumerate(data.T[i])
            }
            for i in range(1, data.d + 1)
        },
    }


def fock_from_json(obj: Any) -> FockData:
    if not isinstance(obj, dict):
        raise FormatError("Fockデータはオブジェクトである必要があります")
    d = _require_int(obj, "d")
    depth = _require_int(obj, "depth")
    C = {Word.parse(key, d): parse_rational(value) for key, value in _require_map(obj, "C").items()}
    raw_T = _require_map(obj, "T")
    T = {}
    for i in range(1, d + 1):
        levels = raw_T.get(str(i))
        if not isinstance(levels, dict):
            raise FormatError(f"T の \"{i}\" がありません")
        matrices = []
        for k in range(depth + 1):
            matrix = levels.get(str(k))
            if not isinstance(matrix, list) or any(not isinstance(row, list) for row in matrix):
                raise FormatError(f"T_{i}^({k}) は行列（リストのリスト）である必要があります")
            matrices.append([[parse_rational(entry) for entry in row] for row in matrix])
        T[i] = tuple(matrices)
    return FockData(d, depth, C, T)


def family_to_json(family: MonicFamily) -> Dict[str, Any]:
    return {
        "d": family.d,
        "degree": family.degree,
        "polynomials": {str(word): polynomial_to_json(family[word]) for word in family},
        "norms_sq": {str(word): format_rational(family.norm_sq(word)) for word in family},
    }


def b_key(i: int, w: Word, u: Word) -> str:
    return f"{i}|{w}|{u}"


def coefficients_to_json(coeffs: RecursionCoefficients) -> Dict[str, Any]:
    B = {}
    for k in range(coeffs.depth):
        for u in level_words(coeffs.d, k):
            for w in level_words(coeffs.d, k):
                for i in range(1, coeffs.d + 1):
                    B[b_key(i, w, u)] = format_rational(coeffs.B[(i, w, u)])
    return {
        "C": {str(word): format_rational(value) for word, value in sorted(coeffs.C.items())},
        "B": B,
    }


def read_json(path: str) -> Any:
    """JSON ファイルを読む（形式エラーは FormatError）"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise FormatError(f"JSON を解釈できません: {path}: {exc}") from exc


def dumps(obj: Any) -> str:
    """決定的な JSON 文字列（キー順は呼び出し側の構築順）"""
    return json.dumps(obj, ensure_ascii=False, indent=Config.get_json_indent())


def write_json(obj: Any, path: Optional[str] = None):
    """path が無ければ標準出力へ"""
    text = dumps(obj) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")


def write_matrix_csv(path: Path, index: Sequence[Word], matrix: Sequence[Sequence[Fraction]]):
    """行列を有理数文字列の CSV で書き出す（先頭行と先頭列にワード）"""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow([""] + [str(word) or "∅" for word in index])
        for word, row in zip(index, matrix):
            writer.writerow([str(word) or "∅"] + [format_rational(entry) for entry in row])


def load_table(path: str) -> MomentTable:
    try:
        return table_from_json(read_json(path))
    except NcmopsError:
        raise
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"モーメント表の形式が不正です: {path}: {exc}") from exc


def load_fock(path: str) -> FockData:
    try:
        return fock_from_json(read_json(path))
    except NcmopsError:
        raise
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"Fockデータの形式が不正です: {path}: {exc}") from exc
