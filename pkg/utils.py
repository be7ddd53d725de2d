"""
通用工具模块
包含日志记录、结果文件保存、超时控制和线程池等功能
"""

import json
import logging
import sys
import time
from concurrent.futures import Executor, ThreadPoolExecutor
from pathlib import Path
from typing import Any, Optional, Union

from config import DataConfig
from exceptions import TimeLimitExceeded


class Logger:
    """日志管理器"""

    @staticmethod
    def setup_logger(name: str, log_file: str = None, level: Union[int, str, None] = None) -> logging.Logger:
        """
        设置日志记录器

        参数:
            name: 日志记录器名称
            log_file: 日志文件名（可选，默认取 TED_LOG_FILE）
            level: 日志级别（默认取 TED_LOG_LEVEL）

        返回:
            配置好的日志记录器
        """
        logger = logging.getLogger(name)
        logger.setLevel(level or DataConfig.LOG_LEVEL)

        # 避免重复添加处理器
        if logger.handlers:
            return logger

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

        # 控制台处理器（stderr，避免污染标准输出上的报告）
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

        log_file = log_file or DataConfig.LOG_FILE
        if log_file:
            DataConfig.LOG_DIR.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(
                DataConfig.LOG_DIR / log_file,
                encoding='utf-8'
            )
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

        # 交给根记录器之外的处理器，不重复输出
        logger.propagate = False
        return logger

    @staticmethod
    def set_level(level: Union[int, str]):
        """统一调整项目内所有已创建记录器的级别"""
        for name, item in logging.Logger.manager.loggerDict.items():
            if isinstance(item, logging.Logger) and item.handlers:
                item.setLevel(level)


class DataManager:
    """结果管理器，处理模式文件、指标报告和矩阵的保存"""

    def __init__(self, logger: logging.Logger = None):
        """
        初始化结果管理器

        参数:
            logger: 日志记录器
        """
        self.logger = logger or Logger.setup_logger(self.__class__.__name__)

    def save_json(self, data: Any, filepath: Union[str, Path], ensure_ascii: bool = False) -> Path:
        """
        保存数据为JSON文件

        参数:
            data: 要保存的数据
            filepath: 目标路径
            ensure_ascii: 是否确保ASCII编码

        返回:
            写入的路径
        """
        filepath = Path(filepath)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(data, f, ensure_ascii=ensure_ascii, indent=2, sort_keys=True)
            f.write("\n")

        self.logger.info(f"数据已保存到: {filepath}")
        return filepath

    def save_text(self, text: str, filepath: Union[str, Path]) -> Path:
        """
        保存纯文本文件

        参数:
            text: 文本内容
            filepath: 目标路径

        返回:
            写入的路径
        """
        filepath = Path(filepath)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        filepath.write_text(text, encoding='utf-8')
        self.logger.info(f"数据已保存到: {filepath}")
        return filepath


class Deadline:
    """运行时间上限，超时由调用方转为部分结果"""

    def __init__(self, seconds: Optional[float] = None):
        """
        参数:
            seconds: 允许的秒数，None 表示不限时
        """
        self.seconds = seconds
        self.started = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self.started

    def expired(self) -> bool:
        return self.seconds is not None and self.elapsed() > self.seconds

    def check(self, partial_factory=None):
        """
        超时则抛出 TimeLimitExceeded

        参数:
            partial_factory: 可选的无参函数，生成要携带的部分结果
        """
        if self.expired():
            partial = partial_factory() if partial_factory else None
            raise TimeLimitExceeded(f"超过时间上限 {self.seconds} 秒", partial=partial)


def make_executor(threads: int) -> Optional[Executor]:
    """
    创建线程池；单线程时返回None（调用方顺序执行）

    参数:
        threads: 线程数

    返回:
        ThreadPoolExecutor 或 None
    """
    if threads <= 1:
        return None
    return ThreadPoolExecutor(max_workers=threads, thread_name_prefix="ted")


def ordered_map(executor: Optional[Executor], func, items):
    """按输入顺序返回结果的 map；executor 为 None 时顺序执行"""
    if executor is None:
        return [func(item) for item in items]
    return list(executor.map(func, items))
