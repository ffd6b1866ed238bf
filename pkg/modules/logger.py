"""
ログ管理モジュール
アプリケーション全体のログを統一管理
"""

import logging
import sys
from pathlib import Path
from typing import Optional

from .config import Config

# ログフォーマット
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def setup_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    """ロガーのセットアップ"""
    logger = logging.getLogger(name)

    if logger.handlers:
        return logger

    log_level = level or Config.LOG_LEVEL
    logger.setLevel(getattr(logging, log_level.upper(), logging.WARNING))

    formatter = logging.Formatter(LOG_FORMAT, DATE_FORMAT)

    # 標準出力は JSON 結果専用なので、コンソールログは stderr へ
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logger.level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if Config.LOG_FILE:
        try:
            log_file_path = Path(Config.LOG_FILE)
            log_file_path.parent.mkdir(parents=True, exist_ok=True)

            file_handler = logging.FileHandler(Config.LOG_FILE, encoding="utf-8")
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        except Exception as exc:  # noqa: BLE001
            logger.warning(f"ログファイルの設定に失敗しました: {exc}")

    logger.propagate = False
    return logger


def get_logger(name: str) -> logging.Logger:
    return setup_logger(name)


class RunLogger:
    """CLI 実行専用のロガークラス"""

    def __init__(self, name: str = "ncmops.run"):
        self.logger = get_logger(name)

    def info_command(self, command: str, **params):
        detail = ", ".join(f"{key}={value}" for key, value in params.items() if value is not None)
        self.logger.info(f"[COMMAND] {command} ({detail})")

    def log_verdict(self, verdict: str, witness: Optional[str] = None):
        if witness:
            self.logger.info(f"[VERDICT] {verdict}: {witness}")
        else:
            self.logger.info(f"[VERDICT] {verdict}")

    def log_timing(self, command: str, elapsed: float):
        self.logger.info(f"[TIMING] {command} ({elapsed:.3f}秒)")

    def error_exit(self, message: str, code: int, error: Optional[Exception] = None):
        if error:
            self.logger.error(f"[EXIT {code}] {message}: {error}")
        else:
            self.logger.error(f"[EXIT {code}] {message}")
