"""Runtime settings read from the environment (and a .env file when present)."""
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from interfaces.errors import ConfigError

DEFAULT_TEMPORAL_ADDRESS = "localhost:7233"
LOG_FORMATS = ("console", "json")


@dataclass
class RuntimeSettings:
    """Process-wide knobs; none of them changes numerical results."""
    threads: int = 1
    log_level: str = "INFO"
    log_format: str = "console"
    temporal_address: str = DEFAULT_TEMPORAL_ADDRESS


class SettingsManager:
    """Builds RuntimeSettings from environment variables."""

    @staticmethod
    def from_env(load_env_file: bool = True) -> RuntimeSettings:
        if load_env_file:
            load_dotenv()
        raw_threads = os.getenv("LACONV_THREADS", "1")
        try:
            threads = int(raw_threads)
        except ValueError as e:
            raise ConfigError(f"LACONV_THREADS must be an integer, got '{raw_threads}'") from e
        if threads < 1:
            raise ConfigError(f"LACONV_THREADS must be at least 1, got {threads}")
        log_format = os.getenv("LACONV_LOG_FORMAT", "console").lower()
        if log_format not in LOG_FORMATS:
            raise ConfigError(f"LACONV_LOG_FORMAT must be one of {LOG_FORMATS}, got '{log_format}'")
        return RuntimeSettings(
            threads=threads,
            log_level=os.getenv("LACONV_LOG_LEVEL", "INFO").upper(),
            log_format=log_format,
            temporal_address=os.getenv("TEMPORAL_ADDRESS", DEFAULT_TEMPORAL_ADDRESS),
        )

    @staticmethod
    def defaults() -> RuntimeSettings:
        return RuntimeSettings()
