"""Starlab's experiment plugin loader logic.

This does all the logic required to discover the experiment plugins that ship in a package path.

:Module: starlab.utils.plugin_loader
"""
import importlib
from pkgutil import iter_modules
from typing import Dict, Iterable, List, Type

from starlab.utils.logging import LOGGER


class InvalidPluginListException(Exception):
    """Exception raised if the name for where to pull out a list of plugins isn't actually a list."""


class InvalidPluginClassException(Exception):
    """Exception raised if the plugin is not a valid Starlab plugin object."""


def find_plugins(package_path: Iterable[str], package_prefix: str, plugin_attr_name: str, plugin_super_class: Type, verify_class=True) -> Dict[str, List]:
    """Imports every module directly under the package path and collects the list each one exports under `plugin_attr_name`.

    With `verify_class` every entry must be a subclass of `plugin_super_class`; without it, an instance of it (this is how click commands
    are collected).
    """
    plugins = {}
    verify_method = issubclass if verify_class else isinstance

    LOGGER.debug(f"[🏗️] Loading plugins in the {package_path} location...")
    for package in iter_modules(package_path, package_prefix):
        LOGGER.debug(f"[⚙️] Processing module named: {package.name}")
        module = importlib.import_module(package.name)

        if not hasattr(module, plugin_attr_name):
            LOGGER.debug(f"[⏭️] Skipping module: {package.name} because it lacks the {plugin_attr_name} List")
            continue

        list_of_plugins = getattr(module, plugin_attr_name)
        if not isinstance(list_of_plugins, list):
            raise InvalidPluginListException(
                f"[💥] The package: {package.name} needs a variable named {plugin_attr_name} that is of type List, not type: {type(list_of_plugins)}"
            )

        for plugin in list_of_plugins:
            if not verify_method(plugin, plugin_super_class):
                name = getattr(plugin, "__name__", None) or getattr(plugin, "name", repr(plugin))
                raise InvalidPluginClassException(
                    f"[💥] The plugin: {name} in package: {package.name} does not properly subclass: {plugin_super_class.__name__}"
                )

        plugins[package.name] = list_of_plugins
        LOGGER.debug(f"[👍] Found {len(list_of_plugins)} plugins in {package.name}")

    return plugins
