#!/usr/bin/env python3
"""
ncmops - 非可換多項式の状態に対する MOPS 判定ツール

モーメント表または Fock データ（JSON）を読み込み、MOPS の存在判定・多項式族と漸化式係数の出力・
Hankel 行列式・Fock 状態の評価・Fock データの抽出・往復検証を厳密な有理数演算で行う。
"""

import argparse
import sys
import time
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from modules.config import Config
from modules.errors import (
    AlphabetMismatchError,
    DegreeBoundError,
    DimensionCeilingError,
    FormatError,
    InvalidStateError,
    NotFaithfulError,
    NotOrthogonalError,
)
from modules.fock import FockState, extract_fock_data, validate_fock_data
from modules.hankel import build_frame, check_relation1, frak_h, h, hankel_family
from modules.logger import RunLogger, get_logger
from modules.mops import (
    OrthogonalityVerdict,
    check_relation0,
    extract_recursion,
    gram_schmidt,
    has_mops,
    verify_recursion,
)
from modules.ncpoly import Word, count_words, enumerate_words
from modules.oracle import (
    JacobiData,
    dense_orthogonalize,
    fock_data_from_jacobi,
    jacobi_from_fock_data,
    jacobi_moments,
    jacobi_table,
)
from modules.samples import builtin_fock_data, builtin_table
from modules.serialization import (
    coefficients_to_json,
    family_to_json,
    fock_to_json,
    format_rational,
    load_fock,
    load_table,
    parse_rational,
    polynomial_to_json,
    table_to_json,
    write_json,
    write_matrix_csv,
)
from modules.state import MomentTable, check_state, restrict, seminorm_sq

logger = get_logger(__name__)

GENERATORS = ["catalan", "free-semicircular-d2", "gaussian-duplicated", "jacobi"]


class ExitCode(IntEnum):
    """シェルから判定できる終了コード"""

    OK = 0
    NOT_ORTHOGONAL = 1
    INVALID = 2
    BOUND = 3
    NOT_FAITHFUL = 4
    DIMENSION = 5


@dataclass
class RunConfig:
    """1 回の CLI 実行の設定"""

    subcommand: str
    inputs: List[str] = field(default_factory=list)
    degree: Optional[int] = None
    depth: Optional[int] = None
    out: Optional[str] = None
    max_dim: int = Config.DEFAULT_MAX_DIM
    verify: bool = False
    dump_matrices: Optional[str] = None
    name: Optional[str] = None
    fock: bool = False
    a: List[Fraction] = field(default_factory=list)
    b: List[Fraction] = field(default_factory=list)

    def __post_init__(self):
        for label, value in (("--degree", self.degree), ("--depth", self.depth)):
            if value is not None and value < 0:
                raise FormatError(f"{label} は 0 以上である必要があります: {value}")
        if self.max_dim < 2:
            raise FormatError(f"行列次元の上限は 2 以上である必要があります: {self.max_dim}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        max_dim = args.max_dim
        if max_dim is None:
            if not Config.validate_config():
                raise FormatError("環境変数の設定が不正です")
            max_dim = Config.get_max_dim()
        else:
            try:
                Config.get_json_indent()
            except ValueError as exc:
                raise FormatError(f"{Config.JSON_INDENT_ENV} が整数ではありません") from exc
        return cls(
            subcommand=args.command,
            inputs=[args.input] if getattr(args, "input", None) else [],
            degree=getattr(args, "degree", None),
            depth=getattr(args, "depth", None),
            out=args.out,
            max_dim=max_dim,
            verify=getattr(args, "verify", False),
            dump_matrices=getattr(args, "dump_matrices", None),
            name=getattr(args, "name", None),
            fock=getattr(args, "fock", False),
            a=[parse_rational(x) for x in getattr(args, "a", None) or []],
            b=[parse_rational(x) for x in getattr(args, "b", None) or []],
        )

    @property
    def input(self) -> str:
        return self.inputs[0]

    def require_degree(self) -> int:
        if self.degree is None:
            raise FormatError(f"{self.subcommand}: --degree を指定してください")
        return self.degree

    def require_depth(self) -> int:
        if self.depth is None:
            raise FormatError(f"{self.subcommand}: --depth を指定してください")
        return self.depth


def _ensure_dimension(d: int, n: int, ceiling: int):
    """長さ n 以下の全ワードで添字付けた行列が上限に収まるか"""
    dimension = count_words(d, n)
    if dimension > ceiling:
        raise DimensionCeilingError(dimension, ceiling)


def _validated_table(config: RunConfig) -> MomentTable:
    table = load_table(config.input)
    _ensure_dimension(table.d, table.max_degree // 2, config.max_dim)
    report = check_state(table)
    if not report.ok:
        raise InvalidStateError(f"状態ではありません: {report.message}", report)
    return table


def _verdict_json(verdict: OrthogonalityVerdict) -> dict:
    result = {"ok": verdict.ok, "degree": verdict.degree}
    if not verdict.ok:
        u, w = verdict.witness
        result["witness"] = [str(u), str(w)]
        result["value"] = format_rational(verdict.value)
    return result


def cmd_check(config: RunConfig, run_logger: RunLogger) -> int:
    table = _validated_table(config)
    n = config.require_degree()
    verdict = has_mops(table, n)
    if verdict.ok:
        run_logger.log_verdict("has_mops")
        write_json({"has_mops": True, "degree": n}, config.out)
        return ExitCode.OK
    u, w = verdict.witness
    run_logger.log_verdict("no_mops", verdict.describe())
    write_json(
        {
            "has_mops": False,
            "degree": verdict.degree,
            "witness": [str(u), str(w)],
            "inner_product": format_rational(verdict.value),
        },
        config.out,
    )
    return ExitCode.NOT_ORTHOGONAL


def cmd_orthogonalize(config: RunConfig, run_logger: RunLogger) -> int:
    table = _validated_table(config)
    n = config.require_degree()
    family = gram_schmidt(table, n)
    verdict = has_mops(table, n)
    result = {"has_mops": verdict.ok, "family": family_to_json(family)}
    if not verdict.ok:
        result["note"] = f"MOPS が存在しないため係数を出力しません: {verdict.describe()}"
        run_logger.log_verdict("no_mops", verdict.describe())
        write_json(result, config.out)
        return ExitCode.NOT_ORTHOGONAL

    coeffs = extract_recursion(table, family, n)
    result["coefficients"] = coefficients_to_json(coeffs)
    code = ExitCode.OK
    if config.verify:
        verified = verify_recursion(family, coeffs, table)
        result["verified"] = verified
        if not verified:
            code = ExitCode.NOT_ORTHOGONAL
    run_logger.log_verdict("has_mops")
    write_json(result, config.out)
    return code


def cmd_hankel(config: RunConfig, run_logger: RunLogger) -> int:
    table = _validated_table(config)
    n = config.require_degree()
    if 2 * n > table.bound:
        raise DegreeBoundError(f"hankel: 必要な次数 {2 * n} が上限 {table.bound} を超えています")

    # 次数 n までの忠実性には 𝔥_{n+1} ≠ 0 まで必要
    determinants = {}
    for m in range(n + 2):
        value = frak_h(table, m)
        if m and value == 0:
            raise NotFaithfulError(m)
        determinants[str(m)] = format_rational(value)

    words = enumerate_words(table.d, n)
    family = hankel_family(table, n)
    verdict = check_relation1(table, n)
    run_logger.log_verdict("relation1", verdict.describe())

    if config.dump_matrices:
        directory = Path(config.dump_matrices)
        for u in words:
            frame = build_frame(table, u)
            write_matrix_csv(directory / f"A_{str(u) or 'empty'}.csv", frame.index, frame.matrix)

    write_json(
        {
            "d": table.d,
            "degree": n,
            "frak_h": determinants,
            "h": {str(u): format_rational(h(table, u)) for u in words},
            "polynomials": {str(u): polynomial_to_json(family[u]) for u in words},
            "relation1": _verdict_json(verdict),
        },
        config.out,
    )
    return ExitCode.OK


def cmd_fock(config: RunConfig, run_logger: RunLogger) -> int:
    data = load_fock(config.input)
    report = validate_fock_data(data)
    if not report.ok:
        raise InvalidStateError(f"Fockデータが不正です: {report.message}", report)
    m = config.require_degree()
    if m % 2:
        raise FormatError(f"モーメント表の次数は偶数である必要があります: {m}")
    if m > 2 * data.depth + 1:
        raise DegreeBoundError(f"次数 {m} には深さ {m // 2} 以上が必要です（現在 {data.depth}）")
    _ensure_dimension(data.d, m // 2, config.max_dim)
    table = restrict(FockState(data), m)
    write_json(table_to_json(table), config.out)
    return ExitCode.OK


def cmd_extract(config: RunConfig, run_logger: RunLogger) -> int:
    table = _validated_table(config)
    depth = config.require_depth()
    if table.bound < 2 * depth + 1:
        raise DegreeBoundError(
            f"深さ {depth} の抽出には次数 {2 * depth + 1} までのモーメントが必要です（上限 {table.bound}）"
        )
    family = gram_schmidt(table, depth)
    data = extract_fock_data(table, family, depth)
    run_logger.log_verdict("extracted", f"深さ {depth}")
    write_json(fock_to_json(data), config.out)
    return ExitCode.OK


def _first_mismatch(left: FockState, right: FockState, degree: int) -> Optional[Word]:
    for word in enumerate_words(left.d, degree):
        if left.moment(word) != right.moment(word):
            return word
    return None


def _oracle_checks(data, state: FockState, family) -> Dict[str, bool]:
    depth = data.depth
    dense = dense_orthogonalize(state, depth)
    checks = {
        "oracle_agrees": all(seminorm_sq(state, family[u] - dense[u]) == 0 for u in family),
        "has_mops": has_mops(state, depth).ok,
        "relation0": check_relation0(state, depth).ok,
        "recursion": verify_recursion(family, extract_recursion(state, family, depth), state),
    }
    if data.d == 1:
        moments = jacobi_moments(jacobi_from_fock_data(data), state.bound)
        checks["jacobi_agrees"] = all(
            moments[k] == state.moment(Word((1,) * k, 1)) for k in range(state.bound + 1)
        )
    return checks


def cmd_roundtrip(config: RunConfig, run_logger: RunLogger) -> int:
    data = load_fock(config.input)
    report = validate_fock_data(data)
    if not report.ok:
        raise InvalidStateError(f"Fockデータが不正です: {report.message}", report)
    _ensure_dimension(data.d, data.depth, config.max_dim)

    state = FockState(data)
    family = gram_schmidt(state, data.depth)
    extracted = extract_fock_data(state, family, data.depth)
    mismatch = _first_mismatch(state, FockState(extracted), state.bound)

    result = {"depth": data.depth, "degree": state.bound, "agree": mismatch is None}
    if mismatch is not None:
        result["first_mismatch"] = str(mismatch)
    ok = mismatch is None
    if config.verify:
        checks = _oracle_checks(data, state, family)
        result["verify"] = checks
        ok = ok and all(checks.values())
    run_logger.log_verdict("roundtrip", "一致" if ok else "不一致")
    write_json(result, config.out)
    return ExitCode.OK if ok else ExitCode.NOT_ORTHOGONAL


def cmd_gen(config: RunConfig, run_logger: RunLogger) -> int:
    name = config.name
    if name == "jacobi":
        if not config.a:
            raise FormatError("jacobi には --a と --b を指定してください")
        jacobi = JacobiData(tuple(config.a), tuple(config.b))
        if config.fock:
            write_json(fock_to_json(fock_data_from_jacobi(jacobi)), config.out)
            return ExitCode.OK
        degree = config.degree if config.degree is not None else 2 * jacobi.depth
        write_json(table_to_json(jacobi_table(jacobi, degree)), config.out)
        return ExitCode.OK

    if config.fock:
        if name == "gaussian-duplicated":
            raise FormatError("gaussian-duplicated には Fock 表現がありません（MOPS が存在しない）")
        depth = config.depth if config.depth is not None else 4
        _ensure_dimension(2 if name == "free-semicircular-d2" else 1, depth, config.max_dim)
        write_json(fock_to_json(builtin_fock_data(name, depth)), config.out)
        return ExitCode.OK

    if config.degree is not None:
        _ensure_dimension(1 if name == "catalan" else 2, config.degree // 2, config.max_dim)
    write_json(table_to_json(builtin_table(name, config.degree)), config.out)
    return ExitCode.OK


HANDLERS: Dict[str, Callable[[RunConfig, RunLogger], int]] = {
    "check": cmd_check,
    "orthogonalize": cmd_orthogonalize,
    "hankel": cmd_hankel,
    "fock": cmd_fock,
    "extract": cmd_extract,
    "roundtrip": cmd_roundtrip,
    "gen": cmd_gen,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="出力 JSON のパス（省略時は標準出力）")
    common.add_argument("--max-dim", type=int, dest="max_dim",
                        help=f"行列次元の上限（既定 {Config.DEFAULT_MAX_DIM}、環境変数 {Config.MAX_DIM_ENV}）")

    parser = argparse.ArgumentParser(prog="ncmops", description="非可換 MOPS の厳密判定ツール")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="MOPS が存在するか判定")
    s.add_argument("input", help="モーメント表 JSON")
    s.add_argument("--degree", "-n", type=int, required=True)

    s = sub.add_parser("orthogonalize", parents=[common], help="多項式族と漸化式係数を出力")
    s.add_argument("input", help="モーメント表 JSON")
    s.add_argument("--degree", "-n", type=int, required=True)
    s.add_argument("--verify", action="store_true", help="漸化式を多項式として再検証")

    s = sub.add_parser("hankel", parents=[common], help="Hankel 行列式と正規化多項式")
    s.add_argument("input", help="モーメント表 JSON")
    s.add_argument("--degree", "-n", type=int, required=True)
    s.add_argument("--dump-matrices", dest="dump_matrices", metavar="DIR", help="A_u を CSV で書き出す")

    s = sub.add_parser("fock", parents=[common], help="Fock データからモーメント表を生成")
    s.add_argument("input", help="Fockデータ JSON")
    s.add_argument("--degree", "-n", type=int, required=True, help="最大次数（偶数）")

    s = sub.add_parser("extract", parents=[common], help="モーメント表から Fock データを抽出")
    s.add_argument("input", help="モーメント表 JSON")
    s.add_argument("--depth", "-K", type=int, required=True)

    s = sub.add_parser("roundtrip", parents=[common], help="Fock → モーメント → Fock → モーメントの往復検証")
    s.add_argument("input", help="Fockデータ JSON")
    s.add_argument("--verify", action="store_true", help="オラクルとの照合も行う")

    s = sub.add_parser("gen", parents=[common], help="組み込みの例を出力")
    s.add_argument("name", choices=GENERATORS)
    s.add_argument("--degree", "-n", type=int, help="モーメント表の最大次数")
    s.add_argument("--depth", "-K", type=int, help="Fock データの深さ")
    s.add_argument("--fock", action="store_true", help="モーメント表の代わりに Fock データを出力")
    s.add_argument("--a", nargs="+", help="jacobi の対角成分 a_0..a_K")
    s.add_argument("--b", nargs="+", help="jacobi の非対角重み b_1..b_K")
    return parser


def _fail(run_logger: RunLogger, code: ExitCode, message: str, error: Exception) -> int:
    print(f"ncmops: {message}: {error}", file=sys.stderr)
    run_logger.error_exit(message, int(code), error)
    return int(code)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    run_logger = RunLogger()
    try:
        config = RunConfig.from_args(args)
        run_logger.info_command(config.subcommand, input=config.inputs or None, degree=config.degree,
                                depth=config.depth, max_dim=config.max_dim)
        logger.debug(f"設定: {Config.describe()}")
        start = time.perf_counter()
        code = HANDLERS[config.subcommand](config, run_logger)
        run_logger.log_timing(config.subcommand, time.perf_counter() - start)
        return int(code)
    except NotOrthogonalError as exc:
        return _fail(run_logger, ExitCode.NOT_ORTHOGONAL, "直交していません", exc)
    except DegreeBoundError as exc:
        return _fail(run_logger, ExitCode.BOUND, "次数の上限が足りません", exc)
    except NotFaithfulError as exc:
        return _fail(run_logger, ExitCode.NOT_FAITHFUL, "状態が忠実ではありません", exc)
    except DimensionCeilingError as exc:
        return _fail(run_logger, ExitCode.DIMENSION, "行列次元の上限を超えています", exc)
    except (InvalidStateError, FormatError, AlphabetMismatchError) as exc:
        return _fail(run_logger, ExitCode.INVALID, "入力が不正です", exc)
    except OSError as exc:
        return _fail(run_logger, ExitCode.INVALID, "ファイルを読み書きできません", exc)


if __name__ == "__main__":
    sys.exit(main())
