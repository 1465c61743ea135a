#!/usr/bin/env python3
"""
dgmotion - 双图正则的视频前景/背景分离

主程序入口
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from Controller import (DEFAULT_NOISE_LEVELS, DetectController, EvaluationController, ExitCode,
                        GraphInfoController, NoiseSweepController, SynthesisController)
from Core.Repository import Constant, parse_config
from Core.solver import PRESETS
from Utils.Exceptions import ConfigException

logger = logging.getLogger("dgmotion")


def _key_value(text: str):
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    return key.strip(), value.strip()


def _levels(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value 配置文件")
    common.add_argument("--preset", choices=sorted(PRESETS), help="预设参数组")
    common.add_argument("--output", metavar="DIR", help="输出目录")
    common.add_argument("--seed", type=int, help="随机种子")
    common.add_argument("--fg-threshold", type=float, metavar="X", help="前景阈值")
    common.add_argument("--dry-run", action="store_true", help="只校验与构造，不写出文件")
    common.add_argument("--verbose", "-v", action="store_true", help="输出调试日志")
    common.add_argument("--input-frames", metavar="DIR", help="帧目录")
    common.add_argument("--input-matrix", metavar="PATH", help="DGM1 矩阵文件")
    common.add_argument("--synthetic", metavar="SPEC", help="合成描述文件，或 default")
    common.add_argument("--set", dest="assignments", action="append", type=_key_value, default=[],
                        metavar="KEY=VALUE", help="覆盖任意配置键，可重复")

    parser = argparse.ArgumentParser(prog=Constant.name, description=Constant.description)
    parser.add_argument("--version", action="version", version=f"%(prog)s {Constant.version}")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("detect", parents=[common], help="分离前景与背景并写出产物")
    commands.add_parser("eval", parents=[common], help="将 detect 的产物与真值比较")
    synth = commands.add_parser("synth", parents=[common], help="生成合成视频与真值")
    synth.add_argument("spec", nargs="?", default="default", help="合成描述文件，或 default")
    commands.add_parser("graph-info", parents=[common], help="构造拉普拉斯并输出摘要")
    sweep = commands.add_parser("noise-sweep", parents=[common], help="噪声实验")
    sweep.add_argument("--levels", type=_levels, default=list(DEFAULT_NOISE_LEVELS),
                       metavar="S1,S2,...", help="噪声标准差列表")
    return parser


def overrides_from(args: argparse.Namespace) -> Dict[str, Any]:
    """命令行参数到配置键的映射；未给出的参数为 None，不覆盖。"""
    overrides: Dict[str, Any] = {
        "output_dir": args.output,
        "seed": args.seed,
        "fg_threshold": args.fg_threshold,
        "input_frames": args.input_frames,
        "input_matrix": args.input_matrix,
        "input_synthetic": args.synthetic,
    }
    for key, value in args.assignments:
        overrides[key] = value
    return overrides


def main(argv: Optional[List[str]] = None) -> int:
    """主程序入口，返回退出码"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = parse_config(args.config, args.preset, overrides_from(args))
    except ConfigException as e:
        logger.error(str(e))
        return int(ExitCode.INPUT_ERROR)

    if args.command == "detect":
        controller = DetectController(config, dry_run=args.dry_run)
    elif args.command == "eval":
        controller = EvaluationController(config, dry_run=args.dry_run)
    elif args.command == "synth":
        controller = SynthesisController(config, source=args.spec, dry_run=args.dry_run)
    elif args.command == "graph-info":
        controller = GraphInfoController(config, dry_run=args.dry_run)
    else:
        controller = NoiseSweepController(config, levels=args.levels, dry_run=args.dry_run)
    return controller.execute()


if __name__ == "__main__":
    sys.exit(main())
