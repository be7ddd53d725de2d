"""
TED多样化模式挖掘项目主启动文件
提供 mine / bench / matrix 三个子命令
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

# 添加当前目录到路径
sys.path.append(str(Path(__file__).parent))

from config import Algorithms, DataConfig, ExitCodes, MiningConfig, MiningDefaults
from exceptions import (CapacityError, ConfigError, GraphParseError, GraphStructureError, ResourceLimitError,
                        TedError, TimeLimitExceeded)
from utils import DataManager, Logger


def build_parser() -> argparse.ArgumentParser:
    """构造命令行解析器"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--input', required=True, help='图数据库文件（行格式）')
    common.add_argument('--k', type=int, default=MiningDefaults.K, help=f'模式数量（默认{MiningDefaults.K}）')
    common.add_argument('--emax', type=int, default=MiningDefaults.EMAX, help=f'模式最大边数（默认{MiningDefaults.EMAX}）')
    common.add_argument('--alpha', default=MiningDefaults.ALPHA, help=f'交换判据 α ∈ [0,1]（默认{MiningDefaults.ALPHA}）')
    common.add_argument('--minsup', default=MiningDefaults.MINSUP, help=f'FSG 变体的最小支持度（默认{MiningDefaults.MINSUP}）')
    common.add_argument('--threads', type=int, default=MiningDefaults.THREADS, help='线程数（默认1）')
    common.add_argument('--time-limit', type=float, help='运行时间上限（秒）')
    common.add_argument('--opt-candidate-cap', type=int, default=MiningDefaults.OPT_CANDIDATE_CAP,
                        help=f'精确求解的候选上限（默认{MiningDefaults.OPT_CANDIDATE_CAP}）')
    common.add_argument('--embedding-guard', type=int, default=MiningDefaults.EMBEDDING_GUARD,
                        help='每个(模式, 图)对的嵌入数量上限')
    common.add_argument('--verbose', '-v', action='store_true', help='详细输出')
    common.add_argument('--quiet', '-q', action='store_true', help='静默模式')

    parser = argparse.ArgumentParser(
        prog="ted",
        description="TED: top-k 边多样化模式挖掘",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
使用示例:
  # 挖掘模式并输出模式文件和指标
  python main.py mine --input toy.lg --algo ted --k 2 --emax 3 --output pats.lg --metrics report.json

  # 对比多个算法
  python main.py bench --input toy.lg --algos ted,all_g,opt --k 2 --emax 3

  # 由已有模式文件生成包含矩阵
  python main.py matrix --input toy.lg --patterns pats.lg --matrix matrix.csv
        """
    )
    subparsers = parser.add_subparsers(dest='command', help='子命令')

    mine_parser = subparsers.add_parser('mine', parents=[common], help='运行一个算法')
    mine_parser.add_argument('--algo', choices=Algorithms.ALL, default=Algorithms.TED, help='算法（默认ted）')
    mine_parser.add_argument('--output', help='模式文件输出路径')
    mine_parser.add_argument('--metrics', help='指标报告（JSON）输出路径')
    mine_parser.add_argument('--matrix', help='模式包含矩阵输出路径')

    bench_parser = subparsers.add_parser('bench', parents=[common], help='在同一数据库上对比多个算法')
    bench_parser.add_argument('--algos', default=f"{Algorithms.TED},{Algorithms.ALL_G}", help='逗号分隔的算法列表')
    bench_parser.add_argument('--output', help='对比表（CSV）输出路径')
    bench_parser.add_argument('--metrics', help='各算法指标报告（JSON）输出路径')

    matrix_parser = subparsers.add_parser('matrix', parents=[common], help='输出模式包含矩阵')
    matrix_parser.add_argument('--algo', choices=Algorithms.ALL, default=Algorithms.TED, help='未给出 --patterns 时运行的算法')
    matrix_parser.add_argument('--patterns', help='已有的模式文件')
    matrix_parser.add_argument('--matrix', help='矩阵输出路径（默认输出到标准输出）')
    return parser


def make_config(args, algorithm: str) -> MiningConfig:
    return MiningConfig(
        k=args.k,
        emax=args.emax,
        alpha=args.alpha,
        minsup=args.minsup,
        algorithm=algorithm,
        embedding_guard=args.embedding_guard,
        opt_candidate_cap=args.opt_candidate_cap,
        threads=args.threads,
        time_limit=args.time_limit,
    ).validate()


def parse_algorithms(text: str, logger) -> List[str]:
    """解析 --algos；重复的算法名只保留一次"""
    names = []
    for name in (item.strip() for item in text.split(",")):
        if not name:
            continue
        if name not in Algorithms.ALL:
            raise ConfigError(f"未知算法: {name}（可选: {', '.join(Algorithms.ALL)}）")
        if name in names:
            logger.warning(f"算法 {name} 重复，已忽略")
            continue
        names.append(name)
    if not names:
        raise ConfigError("--algos 至少需要一个算法")
    return names


def run_mine(args, db, input_size: int, data_manager: DataManager, logger) -> int:
    from Ted_baselines.baselines import run_algorithm
    from Ted_report.report import RunReport, containment_matrix, render_matrix, write_pattern_file

    cfg = make_config(args, args.algo)
    try:
        result = run_algorithm(db, cfg)
    except TimeLimitExceeded as e:
        if args.metrics and e.partial is not None:
            data_manager.save_json(RunReport.from_result(e.partial, cfg, input_size).to_dict(), args.metrics)
        raise

    report = RunReport.from_result(result, cfg, input_size)
    if args.output:
        data_manager.save_text(write_pattern_file(result.patterns, db), args.output)
    if args.metrics:
        data_manager.save_json(report.to_dict(), args.metrics)
    if args.matrix:
        data_manager.save_text(render_matrix(containment_matrix(result.patterns, db)), args.matrix)

    print(f"\n=== 挖掘完成 [{result.algorithm}] ===")
    print(f"模式数量: {len(result.patterns)}")
    print(f"总覆盖: {result.total_coverage}/{result.total_edges} ({float(result.coverage_rate):.4f})")
    print(f"枚举模式: {result.metrics.patterns_enumerated}  交换: {result.metrics.swaps}  "
          f"PRM剪枝: {result.metrics.prm_pruned}")
    print(f"耗时: {report.elapsed_ms:.1f} ms")
    return ExitCodes.OK


def run_bench(args, db, input_size: int, data_manager: DataManager, logger) -> int:
    from Ted_baselines.baselines import run_algorithm
    from Ted_report.report import RunReport, bench_table

    names = parse_algorithms(args.algos, logger)
    reports = []
    for name in names:
        cfg = make_config(args, name)
        try:
            reports.append(RunReport.from_result(run_algorithm(db, cfg), cfg, input_size))
        except (CapacityError, ResourceLimitError, TimeLimitExceeded) as e:
            logger.warning(f"算法 {name} 未完成: {e}")
            reports.append(RunReport.failed(name, cfg, str(e), db.total_edges))

    table = bench_table(reports)
    print("\n=== 算法对比 ===")
    print(table.to_string(index=False))
    if args.output:
        data_manager.save_text(table.to_csv(index=False), args.output)
    if args.metrics:
        data_manager.save_json([r.to_dict() for r in reports], args.metrics)
    return ExitCodes.OK


def run_matrix(args, db, input_size: int, data_manager: DataManager, logger) -> int:
    from Ted_baselines.baselines import run_algorithm
    from Ted_report.report import containment_matrix, read_pattern_file, render_matrix

    if args.patterns:
        graphs = [graph for graph, _ in read_pattern_file(Path(args.patterns))]
    else:
        graphs = [p.graph for p in run_algorithm(db, make_config(args, args.algo)).patterns]

    text = render_matrix(containment_matrix(graphs, db))
    if args.matrix:
        data_manager.save_text(text, args.matrix)
    else:
        sys.stdout.write(text)
    return ExitCodes.OK


COMMANDS = {
    'mine': run_mine,
    'bench': run_bench,
    'matrix': run_matrix,
}


def main(argv: Optional[List[str]] = None) -> int:
    """主函数，处理命令行参数并运行相应子命令"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return ExitCodes.USAGE

    # 设置日志级别
    if args.verbose:
        log_level = 'DEBUG'
    elif args.quiet:
        log_level = 'ERROR'
    else:
        log_level = DataConfig.LOG_LEVEL
    DataConfig.LOG_LEVEL = log_level
    Logger.set_level(log_level)

    logger = Logger.setup_logger("TedMain")
    data_manager = DataManager(logger)

    try:
        from Ted_graph.graph_model import read_database

        input_path = Path(args.input)
        try:
            db = read_database(input_path)
        except OSError as e:
            logger.error(f"无法读取输入文件 {input_path}: {e}")
            print(f"错误: 无法读取输入文件 {input_path}", file=sys.stderr)
            return ExitCodes.INPUT
        logger.info(f"读取数据库 {input_path}: {len(db)} 个图，{db.total_edges} 条边")
        return COMMANDS[args.command](args, db, input_path.stat().st_size, data_manager, logger)

    except (GraphParseError, GraphStructureError, OSError) as e:
        logger.error(f"输入格式错误: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return ExitCodes.INPUT
    except ConfigError as e:
        logger.error(f"参数错误: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return ExitCodes.CONFIG
    except (CapacityError, ResourceLimitError) as e:
        logger.error(f"超过资源上限: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return ExitCodes.RESOURCE
    except TimeLimitExceeded as e:
        logger.error(f"超过时间上限: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return ExitCodes.TIME_LIMIT
    except TedError as e:
        logger.error(f"运行 {args.command} 时发生错误: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return ExitCodes.INTERNAL
    except Exception as e:
        logger.error(f"运行 {args.command} 时发生未预期的错误: {e}")
        print(f"错误: {e}", file=sys.stderr)
        if args.verbose:
            import traceback
            traceback.print_exc()
        return ExitCodes.INTERNAL


if __name__ == "__main__":
    sys.exit(main())
