"""
TED多样化模式挖掘项目配置文件
包含默认挖掘参数、算法名称、退出码和目录设置
"""

import os
from dataclasses import dataclass, asdict
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

from dotenv import load_dotenv

from exceptions import ConfigError

# 读取项目根目录下的 .env（如果存在）
load_dotenv()


def parse_fraction(value: Union[str, int, float, Fraction], name: str) -> Fraction:
    """
    将十进制文本或数值转换为精确分数

    参数:
        value: 十进制字符串、整数、浮点数或分数
        name: 参数名称（用于错误信息）

    返回:
        Fraction对象
    """
    if isinstance(value, Fraction):
        return value
    try:
        # 浮点数先转成文本，保留十进制含义（0.1 -> 1/10）
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"参数 {name} 不是合法的小数: {value!r}") from e


# 数据存储配置
class DataConfig:
    # 项目根目录
    PROJECT_ROOT = Path(__file__).parent

    # 日志目录
    LOG_DIR = PROJECT_ROOT / "logs"

    # 输出目录（模式文件、指标报告）
    OUTPUT_DIR = PROJECT_ROOT / "output"

    # 日志文件（为空则只输出到控制台）
    LOG_FILE = os.getenv("TED_LOG_FILE", "")
    LOG_LEVEL = os.getenv("TED_LOG_LEVEL", "INFO")

    @classmethod
    def ensure_directories(cls):
        """确保日志和输出目录存在"""
        for directory in (cls.LOG_DIR, cls.OUTPUT_DIR):
            directory.mkdir(parents=True, exist_ok=True)


# 挖掘参数默认值
class MiningDefaults:
    K = int(os.getenv("TED_K", "5"))
    EMAX = int(os.getenv("TED_EMAX", "10"))
    ALPHA = os.getenv("TED_ALPHA", "1.0")
    MINSUP = os.getenv("TED_MINSUP", "0.2")

    # 资源保护
    EMBEDDING_GUARD = int(os.getenv("TED_EMBEDDING_GUARD", str(10 ** 7)))  # 每个(模式, 图)对的嵌入上限
    OPT_CANDIDATE_CAP = int(os.getenv("TED_OPT_CANDIDATE_CAP", "25"))
    OPT_SUBSET_CAP = 10 ** 7
    POOL_GUARD = int(os.getenv("TED_POOL_GUARD", str(10 ** 6)))

    THREADS = 1


# 算法名称
class Algorithms:
    BASE = "base"
    PRM = "prm"
    IPS = "ips"
    TED = "ted"
    ALL_G = "all_g"
    FSG_G = "fsg_g"
    ALL_T = "all_t"
    FSG_T = "fsg_t"
    OPT = "opt"
    FS = "fs"

    # 基于交换的TED变体
    SWAPPING = (BASE, PRM, IPS, TED)
    ALL = (BASE, PRM, IPS, TED, ALL_G, FSG_G, ALL_T, FSG_T, OPT, FS)


# 命令行退出码
class ExitCodes:
    OK = 0
    INTERNAL = 1
    USAGE = 2
    INPUT = 3
    CONFIG = 4
    RESOURCE = 5
    TIME_LIMIT = 6


@dataclass
class MiningConfig:
    """挖掘参数（k、E_max、α、sup_min、算法及资源保护）"""
    k: int = MiningDefaults.K
    emax: int = MiningDefaults.EMAX
    alpha: Fraction = Fraction(MiningDefaults.ALPHA)
    minsup: Fraction = Fraction(MiningDefaults.MINSUP)
    algorithm: str = Algorithms.TED
    embedding_guard: int = MiningDefaults.EMBEDDING_GUARD
    opt_candidate_cap: int = MiningDefaults.OPT_CANDIDATE_CAP
    opt_subset_cap: int = MiningDefaults.OPT_SUBSET_CAP
    pool_guard: int = MiningDefaults.POOL_GUARD
    threads: int = MiningDefaults.THREADS
    time_limit: Optional[float] = None

    def __post_init__(self):
        self.alpha = parse_fraction(self.alpha, "alpha")
        self.minsup = parse_fraction(self.minsup, "minsup")

    def validate(self) -> "MiningConfig":
        """
        校验参数取值范围

        返回:
            自身（便于链式调用）
        """
        if self.k < 1:
            raise ConfigError(f"k 必须 >= 1，当前为 {self.k}")
        if self.emax < 1:
            raise ConfigError(f"emax 必须 >= 1，当前为 {self.emax}")
        if not 0 <= self.alpha <= 1:
            raise ConfigError(f"alpha 必须位于 [0, 1]，当前为 {self.alpha}")
        if not 0 < self.minsup <= 1:
            raise ConfigError(f"minsup 必须位于 (0, 1]，当前为 {self.minsup}")
        if self.algorithm not in Algorithms.ALL:
            raise ConfigError(f"未知算法: {self.algorithm}（可选: {', '.join(Algorithms.ALL)}）")
        for name in ("embedding_guard", "opt_candidate_cap", "opt_subset_cap", "pool_guard", "threads"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} 必须 >= 1，当前为 {getattr(self, name)}")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ConfigError(f"time_limit 必须为正数，当前为 {self.time_limit}")
        return self

    def replace(self, **changes: Any) -> "MiningConfig":
        """返回修改了部分字段的新配置"""
        values = asdict(self)
        values.update(changes)
        return MiningConfig(**values)

    def to_dict(self) -> Dict[str, Any]:
        """导出为可写入JSON的字典（分数以 "n/d" 文本表示）"""
        return {
            "k": self.k,
            "emax": self.emax,
            "alpha": str(self.alpha),
            "minsup": str(self.minsup),
            "embedding_guard": self.embedding_guard,
            "opt_candidate_cap": self.opt_candidate_cap,
            "threads": self.threads,
            "time_limit": self.time_limit,
        }


# 初始化配置
def init_config():
    """初始化配置，创建必要的目录"""
    DataConfig.ensure_directories()
    print("配置初始化完成，日志和输出目录已创建")


if __name__ == "__main__":
    init_config()
