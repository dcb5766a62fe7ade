"""
Configuration management for ADCodes
"""

import json
import logging
import os
from dataclasses import dataclass, asdict, field, fields
from pathlib import Path
from typing import List, Optional


logger = logging.getLogger("adcodes.config")

CACHE_DIR_ENV = "ADCODES_CACHE_DIR"


@dataclass
class AppConfig:
    """Application configuration data class"""
    log_level: str = "INFO"
    log_dir: Optional[str] = None
    max_word_length: int = 32
    graph_max_n: int = 12
    greedy_max_n: int = 20
    exact_max_n: int = 10
    table_max_n: int = 16
    simulation_max_qubits: int = 12
    default_time_budget: float = 60.0
    residual_gammas: List[float] = field(default_factory=lambda: [1e-4, 2e-4, 4e-4, 8e-4])
    fit_degree: int = 3
    residual_threshold: float = 1e-6
    fidelity_fit_window: float = 0.05
    fidelity_fit_degree: int = 2
    threads: int = 1
    cache_dir: Optional[str] = None

    def effective_cache_dir(self) -> Optional[Path]:
        """Cache directory for conflict graphs, environment first"""
        value = os.environ.get(CACHE_DIR_ENV) or self.cache_dir
        return Path(value) if value else None


class ConfigManager:
    """Manages application configuration"""

    def __init__(self, config_path: str = "config.json"):
        self.config_path = Path(config_path)
        self.config: AppConfig = AppConfig()

    def load_config(self) -> bool:
        """Load configuration from file.

        A missing file keeps the defaults. A file that is not valid JSON
        or has values of the wrong type raises ValueError.
        """
        if not self.config_path.exists():
            logger.warning(f"Configuration file not found: {self.config_path}, using defaults")
            self.config = AppConfig()
            return False

        try:
            with open(self.config_path, 'r') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in configuration file {self.config_path}: {e}") from e

        if not isinstance(data, dict):
            raise ValueError(f"Configuration file {self.config_path} must hold a JSON object")

        # Only the fields that exist in the dataclass are taken
        known = {f.name for f in fields(AppConfig)}
        config_data = {key: value for key, value in data.items() if key in known}
        ignored = sorted(set(data) - known)
        if ignored:
            logger.debug(f"Ignoring unknown configuration keys: {', '.join(ignored)}")

        try:
            self.config = AppConfig(**config_data)
        except TypeError as e:
            raise ValueError(f"Bad configuration in {self.config_path}: {e}") from e

        logger.info(f"Loaded configuration from {self.config_path}")
        return True

    def save_config(self) -> bool:
        """Save configuration to file"""
        try:
            with open(self.config_path, 'w') as f:
                json.dump(asdict(self.config), f, indent=2)
                f.write("\n")
            return True
        except OSError as e:
            logger.error(f"Error saving configuration: {e}")
            return False

    def update(self, **kwargs) -> AppConfig:
        """Override configuration values in memory"""
        for key, value in kwargs.items():
            if value is not None and hasattr(self.config, key):
                setattr(self.config, key, value)
        return self.config

    def validate_config(self) -> List[str]:
        """Validate configuration and return list of errors"""
        errors = []
        config = self.config

        for name in ("graph_max_n", "greedy_max_n", "exact_max_n",
                     "table_max_n", "simulation_max_qubits"):
            value = getattr(config, name)
            if not isinstance(value, int) or value < 2 or value > config.max_word_length:
                errors.append(f"{name} must be an integer in [2, {config.max_word_length}], got {value!r}")

        if config.max_word_length < 2 or config.max_word_length > 32:
            errors.append(f"max_word_length must be in [2, 32], got {config.max_word_length}")
        if config.default_time_budget <= 0:
            errors.append("default_time_budget must be positive")
        if config.residual_threshold <= 0:
            errors.append("residual_threshold must be positive")
        if config.fit_degree < 1:
            errors.append("fit_degree must be at least 1")
        if len(config.residual_gammas) < config.fit_degree + 1:
            errors.append(
                f"need at least {config.fit_degree + 1} residual_gammas for fit degree {config.fit_degree}"
            )
        if any(g <= 0 or g >= 1 for g in config.residual_gammas):
            errors.append("residual_gammas must lie in (0, 1)")
        if not 0 < config.fidelity_fit_window < 1:
            errors.append("fidelity_fit_window must lie in (0, 1)")
        if not 1 <= config.fidelity_fit_degree <= 4:
            errors.append(f"fidelity_fit_degree must be in [1, 4], got {config.fidelity_fit_degree}")
        if config.threads < 1:
            errors.append("threads must be at least 1")
        if config.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            errors.append(f"Unknown log level {config.log_level}")

        return errors
