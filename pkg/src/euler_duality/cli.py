# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 命令行入口

    euler-duality riemann      --config C --out D
    euler-duality simulate     --config C --out D
    euler-duality transform    --config C --manifest M --out D
    euler-duality check        --config C --manifest M --out D [--seed S]
    euler-duality demo-duality --config C --out D

退出码：0 通过，1 检查未通过，2 用法/配置错误，3 数值中止。
"""

import os
import sys
import asyncio
import logging
import argparse
from typing import List, Optional

from .models import ErrorType, LabResult
from .tools import (
    cmd_riemann,
    cmd_simulate,
    cmd_transform,
    cmd_check,
    cmd_demo_duality,
)
from .utils import collect_warnings, strict_failure


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_NUMERICAL_ERRORS = (ErrorType.VACUUM, ErrorType.NUMERICAL_ABORT, ErrorType.DOMAIN_ERROR)


def exit_code(result: LabResult) -> int:
    if result.success:
        return EXIT_OK
    error_type = result.error.error_type if result.error else None
    if error_type is ErrorType.CHECK_FAILED:
        return EXIT_CHECK_FAILED
    if error_type in _NUMERICAL_ERRORS:
        return EXIT_NUMERICAL
    return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="euler-duality", description="Euler 方程 SL(2,R)∧Galilei 对偶验证")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(name: str, help_text: str, manifest: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="场景配置文件 (key = value)")
        p.add_argument("--out", required=True, help="输出目录")
        if manifest:
            p.add_argument("--manifest", required=True, help="输入清单 JSON")
        p.add_argument("--seed", type=int, default=None, help="随机性质扫描的种子 (u64)")
        p.add_argument("--strict", action="store_true", help="运行中出现的警告视为失败")
        return p

    common("riemann", "求解并采样精确 Riemann 问题")
    common("simulate", "运行有限体积求解器")
    common("transform", "对清单中的场施加群元素", manifest=True)
    common("check", "验证跳跃条件、容许性与荷平衡", manifest=True)
    common("demo-duality", "爆炸 → 内爆对偶演示")
    return parser


async def dispatch(args: argparse.Namespace) -> LabResult:
    if args.command == "riemann":
        return await cmd_riemann(config=args.config, out=args.out)
    if args.command == "simulate":
        return await cmd_simulate(config=args.config, out=args.out)
    if args.command == "transform":
        return await cmd_transform(config=args.config, manifest=args.manifest, out=args.out)
    if args.command == "check":
        return await cmd_check(config=args.config, manifest=args.manifest, out=args.out, seed=args.seed)
    return await cmd_demo_duality(config=args.config, out=args.out)


def run(args: argparse.Namespace) -> LabResult:
    if args.seed is not None and args.command != "check":
        logger.debug(f"{args.command} 不使用 --seed，已忽略")
    if not args.strict:
        return asyncio.run(dispatch(args))
    with collect_warnings() as collector:
        result = asyncio.run(dispatch(args))
    if result.success and collector.messages:
        return LabResult(success=False, error=strict_failure(collector.messages, args.command))
    return result


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, os.getenv("LOG_LEVEL", "INFO")),
        format='[%(asctime)s] %(levelname)-8s %(message)s             %(filename)s:%(lineno)d',
        datefmt='%y/%m/%d %H:%M:%S'
    )
    args = build_parser().parse_args(argv)
    result = run(args)
    print(result.model_dump_json(indent=2, exclude_none=True))
    if not result.success:
        logger.error(str(result.error))
    return exit_code(result)


if __name__ == "__main__":
    sys.exit(main())
