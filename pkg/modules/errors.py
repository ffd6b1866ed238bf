"""
例外定義
ライブラリ全体で使う例外の階層
"""

from fractions import Fraction
from typing import Any, Optional, Tuple


class NcmopsError(Exception):
    """ライブラリ例外の基底クラス"""


class AlphabetMismatchError(NcmopsError):
    """アルファベットサイズ d が一致しない"""


class DegreeBoundError(NcmopsError):
    """次数・深さが宣言された上限を超えている"""


class FormatError(NcmopsError, ValueError):
    """JSON・ワード文字列・有理数文字列の形式エラー"""


class DimensionCeilingError(NcmopsError):
    """行列次元が上限を超える"""

    def __init__(self, dimension: int, ceiling: int):
        super().__init__(f"行列次元 {dimension} が上限 {ceiling} を超えています")
        self.dimension = dimension
        self.ceiling = ceiling


class InvalidStateError(NcmopsError):
    """モーメント表・Fockデータが状態の条件を満たさない"""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class NotFaithfulError(NcmopsError):
    """ある次数で 𝔥_n = 0（忠実でない）"""

    def __init__(self, degree: int):
        super().__init__(f"次数 {degree} で Hankel 行列式 𝔥 が 0 です（状態が忠実ではありません）")
        self.degree = degree


class NotOrthogonalError(NcmopsError):
    """多項式族が直交していない"""

    def __init__(self, witness: Tuple[Any, Any], value: Optional[Fraction] = None, message: str = ""):
        u, w = witness
        text = message or f"P_{u!s} と P_{w!s} が直交していません"
        if value is not None:
            text = f"{text} (内積 = {value})"
        super().__init__(text)
        self.witness = witness
        self.value = value
