"""Utility functions"""

from .config import ConfigManager, RunConfig, Tolerances

__all__ = ["ConfigManager", "RunConfig", "Tolerances"]
