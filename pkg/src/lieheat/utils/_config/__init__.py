from lieheat.utils._config._settings import Settings, load_settings, package_path

__all__ = [
    "Settings",
    "load_settings",
    "package_path",
]
