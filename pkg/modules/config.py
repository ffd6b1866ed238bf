"""
設定管理モジュール
環境変数とアプリケーション設定を管理
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# .envファイルを読み込み
load_dotenv()


class Config:
    """アプリケーション設定クラス"""

    # プロジェクトのルートディレクトリ
    PROJECT_ROOT = Path(__file__).parent.parent

    # ログ設定（LOG_FILE が空ならファイル出力なし）
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")
    LOG_FILE: str = os.getenv("LOG_FILE", "")

    # 行列サイズの上限（Hankel 行列・Gram 行列の次元）
    DEFAULT_MAX_DIM: int = 4096
    MAX_DIM_ENV: str = "NCMOPS_MAX_DIM"

    # JSON出力
    DEFAULT_JSON_INDENT: int = 2
    JSON_INDENT_ENV: str = "NCMOPS_JSON_INDENT"

    @classmethod
    def get_max_dim(cls) -> int:
        """行列次元の上限を取得（環境変数は呼び出し時に読み直す）"""
        raw = os.getenv(cls.MAX_DIM_ENV, "")
        if not raw:
            return cls.DEFAULT_MAX_DIM
        return int(raw)

    @classmethod
    def get_json_indent(cls) -> int:
        """JSON のインデント幅を取得（呼び出し時に読み直す）"""
        raw = os.getenv(cls.JSON_INDENT_ENV, "")
        if not raw:
            return cls.DEFAULT_JSON_INDENT
        return int(raw)

    @classmethod
    def validate_config(cls) -> bool:
        """設定の検証"""
        from .logger import get_logger

        logger = get_logger(__name__)
        errors = []

        try:
            if cls.get_max_dim() < 2:
                errors.append(f"{cls.MAX_DIM_ENV} は 2 以上である必要があります")
        except ValueError:
            errors.append(f"{cls.MAX_DIM_ENV} が整数ではありません: {os.getenv(cls.MAX_DIM_ENV)}")

        try:
            if cls.get_json_indent() < 0:
                errors.append(f"{cls.JSON_INDENT_ENV} は 0 以上である必要があります")
        except ValueError:
            errors.append(f"{cls.JSON_INDENT_ENV} が整数ではありません: {os.getenv(cls.JSON_INDENT_ENV)}")

        if errors:
            for error in errors:
                logger.error(f"設定エラー: {error}")
            return False

        return True

    @classmethod
    def describe(cls) -> dict:
        """現在の設定を辞書で返す（デバッグログ用）"""
        return {
            "project_root": str(cls.PROJECT_ROOT),
            "log_level": cls.LOG_LEVEL,
            "log_file": cls.LOG_FILE or None,
            "max_dim": os.getenv(cls.MAX_DIM_ENV, str(cls.DEFAULT_MAX_DIM)),
            "json_indent": os.getenv(cls.JSON_INDENT_ENV, str(cls.DEFAULT_JSON_INDENT)),
        }
