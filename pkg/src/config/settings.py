"""
Application settings and configuration
"""

import os
from typing import Optional
from dotenv import load_dotenv

from ..core.exceptions import ConfigurationError


class Settings:
    """
    Application settings loaded from environment variables.
    """

    def __init__(self):
        """Load settings from environment."""
        load_dotenv()

        self.output_dir: str = os.getenv('OUTPUT_DIR', 'output')
        self.log_level: str = os.getenv('LOG_LEVEL', 'INFO')
        self.population_cap: int = int(os.getenv('POPULATION_CAP', '300'))
        self.event_budget: int = int(os.getenv('EVENT_BUDGET', '10000000'))
        self.workers: int = int(os.getenv('WORKERS', '1'))
        self.moment_batches: int = int(os.getenv('MOMENT_BATCHES', '100'))
        self.step_target: float = float(os.getenv('STEP_TARGET', '0.05'))
        self.table_cache_size: int = int(os.getenv('TABLE_CACHE_SIZE', '4096'))

    def validate(self) -> bool:
        """
        Validate settings.

        Returns:
            True if settings are valid

        Raises:
            ConfigurationError: If a numeric setting is out of range
        """
        positive = {
            'POPULATION_CAP': self.population_cap,
            'EVENT_BUDGET': self.event_budget,
            'WORKERS': self.workers,
            'MOMENT_BATCHES': self.moment_batches,
            'TABLE_CACHE_SIZE': self.table_cache_size,
        }
        for name, value in positive.items():
            if value <= 0:
                raise ConfigurationError(f"{name} must be positive, got {value}")
        if self.moment_batches < 2:
            raise ConfigurationError("MOMENT_BATCHES must be at least 2")
        if not 0.0 < self.step_target <= 0.1:
            raise ConfigurationError(
                f"STEP_TARGET must lie in (0, 0.1], got {self.step_target}"
            )
        return True


# Singleton instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Get settings singleton instance.

    Returns:
        Settings instance
    """
    global _settings
    if _settings is None:
        _settings = Settings()
        _settings.validate()
    return _settings
