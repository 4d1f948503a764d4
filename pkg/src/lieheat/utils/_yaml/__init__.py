from lieheat.utils._yaml._read_yaml import _read_yaml

__all__ = [
    "_read_yaml",
]
