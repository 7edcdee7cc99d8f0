# core/__init__.py
from .settings import settings
from .logger import logger
from .plugin_interface import BoundPlugin, ResolvedGrids
from .plugin_loader import load_bound_plugins


__all__ = [
    "settings",
    "logger",
    "BoundPlugin",
    "ResolvedGrids",
    "load_bound_plugins"
]
