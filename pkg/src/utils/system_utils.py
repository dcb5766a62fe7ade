"""
System utility functions for ADCodes
"""

import logging
import os
import platform
from datetime import datetime
from pathlib import Path
from typing import Dict, Optional

import psutil

from core.exceptions import ResourceLimitError


LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
ROOT_LOGGER = "adcodes"


class SystemUtils:
    """Utility class for system operations"""

    @staticmethod
    def setup_logging(level: str = "INFO", log_dir: Optional[str] = None) -> logging.Logger:
        """Configure the adcodes logger tree: console always, dated file when log_dir is set"""
        log_level = getattr(logging, str(level).upper(), None)
        if not isinstance(log_level, int):
            raise ValueError(f"Unknown log level {level!r}")

        logger = logging.getLogger(ROOT_LOGGER)
        logger.setLevel(log_level)
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()

        formatter = logging.Formatter(LOG_FORMAT)

        console_handler = logging.StreamHandler()
        console_handler.setLevel(log_level)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

        if log_dir:
            directory = Path(log_dir)
            directory.mkdir(parents=True, exist_ok=True)
            log_file = directory / f"adcodes_{datetime.now().strftime('%Y%m%d')}.log"
            file_handler = logging.FileHandler(log_file)
            file_handler.setLevel(log_level)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

        return logger

    @staticmethod
    def get_system_info() -> Dict[str, str]:
        """Get basic system information"""
        return {
            'platform': platform.system(),
            'architecture': platform.machine(),
            'python_version': platform.python_version(),
            'cpu_count': str(os.cpu_count() or 1),
        }

    @staticmethod
    def get_memory_usage() -> Dict[str, float]:
        """Get memory usage information"""
        memory = psutil.virtual_memory()
        return {
            'total_gb': memory.total / (1024**3),
            'available_gb': memory.available / (1024**3),
            'percent_used': memory.percent
        }

    @staticmethod
    def simulation_bytes(n: int) -> int:
        """Rough working set of one n-qubit dense simulation (a few complex dim x dim arrays)"""
        dim = 1 << n
        return 4 * dim * dim * 16

    @staticmethod
    def ensure_simulation_fits(n: int, fraction: float = 0.8) -> None:
        """Refuse simulations whose dense matrices would not fit in available memory"""
        needed_gb = SystemUtils.simulation_bytes(n) / 1024**3
        memory = SystemUtils.get_memory_usage()
        if needed_gb > fraction * memory["available_gb"]:
            raise ResourceLimitError(
                f"Simulating n={n} needs about {needed_gb:.1f} GB, "
                f"only {memory['available_gb']:.1f} GB available "
                f"({memory['percent_used']:.0f}% of {memory['total_gb']:.1f} GB in use)"
            )

    @staticmethod
    def worker_count(requested: int) -> int:
        """Clamp a requested worker count to the available CPUs"""
        return max(1, min(int(requested), psutil.cpu_count(logical=True) or 1))
