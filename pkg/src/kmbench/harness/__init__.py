"""Configuration, experiment runners and the command line."""
from .cli import main, run
from .config import ConfigError, ConfigParseError, ExperimentConfig

__all__ = ["main", "run", "ConfigError", "ConfigParseError", "ExperimentConfig"]
