"""
Configuration management module for the two-qubit XY toolkit
"""
import os
import logging
from pathlib import Path
from typing import Callable, TypeVar
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

VALID_LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')
DEFAULT_LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

_TRUE_WORDS = frozenset({'true', '1', 'yes', 'on'})
_FALSE_WORDS = frozenset({'false', '0', 'no', 'off'})

Number = TypeVar('Number', int, float)


class Config:
    """Configuration class for ambient settings (logging, progress display)

    Numerical tolerances are module constants in the computational modules, not settings.
    """
    def __init__(self):
        # Logging
        self.log_level = self._env_text('LOG_LEVEL', 'INFO').upper()
        self.log_format = os.getenv('LOG_FORMAT', DEFAULT_LOG_FORMAT)
        self.logs_dir = Path(self._env_text('LOGS_DIR', './logs'))
        self.log_to_file = self._env_flag('LOG_TO_FILE', False)

        # Progress bars for long sweeps (stderr only)
        self.show_progress = self._env_flag('SHOW_PROGRESS', True)
        self.progress_min_rows = self._env_number('PROGRESS_MIN_ROWS', 50, int)
        self.progress_mininterval = self._env_number('PROGRESS_MININTERVAL', 0.5, float)

    def _env_text(self, key: str, default: str = '') -> str:
        """Environment value with any trailing '# comment' stripped"""
        value = os.getenv(key, default)
        if value and '#' in value:
            value = value.split('#', 1)[0].strip()
        return value

    def _env_number(self, key: str, default: Number, cast: Callable[[str], Number]) -> Number:
        """Numeric environment value; malformed text falls back to the default"""
        text = self._env_text(key, str(default))
        try:
            return cast(text)
        except (ValueError, TypeError):
            logging.warning(f"Invalid {cast.__name__} value for {key}: {text!r}, using default: {default}")
            return default

    def _env_flag(self, key: str, default: bool) -> bool:
        """Boolean environment value (true/false, 1/0, yes/no, on/off)"""
        value = self._env_text(key, str(default)).lower()
        if value in _TRUE_WORDS:
            return True
        if value in _FALSE_WORDS:
            return False
        logging.warning(f"Invalid boolean value for {key}: {value!r}, using default: {default}")
        return default

    def validate(self) -> bool:
        """Validate configuration settings"""
        errors = []

        if self.log_level not in VALID_LOG_LEVELS:
            errors.append(f"LOG_LEVEL must be one of {', '.join(VALID_LOG_LEVELS)}, got {self.log_level!r}")

        if self.log_to_file and self.logs_dir.exists() and not self.logs_dir.is_dir():
            errors.append(f"LOGS_DIR {self.logs_dir} exists and is not a directory")

        if self.progress_min_rows < 0:
            errors.append("PROGRESS_MIN_ROWS must be >= 0")

        if self.progress_mininterval < 0:
            errors.append("PROGRESS_MININTERVAL must be >= 0")

        if errors:
            for error in errors:
                logging.error(f"Configuration error: {error}")
            return False

        return True

    def get_log_path(self, stamp: str) -> Path:
        """Get the full path of the daily log file"""
        return self.logs_dir / f'xyqubit_{stamp}.log'

    def __repr__(self):
        return f"<Config: level={self.log_level} file={self.log_to_file}>"


# Global config instance
config = Config()
