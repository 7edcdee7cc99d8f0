# core/plugin_loader.py
import importlib.metadata
from typing import Any, Dict, Iterable, Optional, Type, Union

from core.logger import logger
from core.plugin_interface import BoundPlugin

ENTRY_POINT_GROUP = "berezin.bounds"

PluginSource = Union[Type[BoundPlugin], BoundPlugin]


def _instantiate(loaded_object: Any, shared_resources: Dict[str, Any], origin: str) -> Optional[BoundPlugin]:
    if isinstance(loaded_object, type) and issubclass(loaded_object, BoundPlugin):
        required = loaded_object.get_required_resources()
        resources = {name: res for name, res in shared_resources.items() if name in required}
        return loaded_object(shared_resources=resources)
    if isinstance(loaded_object, BoundPlugin):
        return loaded_object
    logger.warning(f"'{origin}' provided an object of type {type(loaded_object)}, not a BoundPlugin. Skipping.")
    return None


def _register(plugins: Dict[str, BoundPlugin], plugin: BoundPlugin, origin: str) -> None:
    if plugin.bound_id in plugins:
        logger.warning(f"Duplicate bound id '{plugin.bound_id}' from '{origin}'. Overwriting.")
    plugins[plugin.bound_id] = plugin
    logger.debug(f"Registered bound plugin {plugin.bound_id} ({plugin.description}) from '{origin}'.")


def load_bound_plugins(shared_resources: Optional[Dict[str, Any]] = None,
                       builtins: Optional[Iterable[PluginSource]] = None) -> Dict[str, BoundPlugin]:
    """
    Build the bound registry.
    1. Registers the built-in catalog plugins.
    2. Adds plugins exposed through the "berezin.bounds" entry-point group;
       these may replace a built-in with the same bound id.
    Shared resources are injected into plugin classes that declare them.
    """
    shared_resources = shared_resources or {}
    plugins: Dict[str, BoundPlugin] = {}

    if builtins is None:
        from modules.verification.catalog_plugins import BUILTIN_PLUGINS
        builtins = BUILTIN_PLUGINS
    for source in builtins:
        plugin = _instantiate(source, shared_resources, "builtin")
        if plugin is not None:
            _register(plugins, plugin, "builtin")

    try:
        entry_points = importlib.metadata.entry_points()
        bound_eps = (entry_points.select(group=ENTRY_POINT_GROUP) if hasattr(entry_points, "select")
                     else entry_points.get(ENTRY_POINT_GROUP, []))
        for ep in bound_eps:
            try:
                plugin = _instantiate(ep.load(), shared_resources, ep.name)
                if plugin is not None:
                    _register(plugins, plugin, ep.name)
                    logger.info(f"Loaded bound plugin via entry point: {plugin.bound_id} from '{ep.module}'.")
            except Exception as e:
                logger.error(f"Failed to load bound plugin from entry point '{ep.name}'.",
                             extra={"entry_point": ep.name, "error": str(e)}, exc_info=True)
    except Exception as e_outer:
        logger.error(f"Error accessing entry points for '{ENTRY_POINT_GROUP}'.",
                     extra={"error": str(e_outer)}, exc_info=True)

    logger.info(f"Total bound plugins loaded: {len(plugins)}")
    return plugins
