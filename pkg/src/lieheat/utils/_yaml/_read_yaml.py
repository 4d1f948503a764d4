import logging
import os

import yaml

logger = logging.getLogger(__name__)


def _read_yaml(path: str | os.PathLike) -> dict:
    """
    Read a YAML document (configuration or errata ledger) and return its mapping.

    Parameters
    ----------
    path : str or os.PathLike
        Path to the YAML file.

    Returns
    -------
    dict
        Parsed content of the YAML file. An empty document yields an empty dict.

    Raises
    ------
    TypeError
        If the provided path is not a string or path-like object.
    yaml.YAMLError
        If the file is not valid YAML or its top level is not a mapping.
    FileNotFoundError
        If the specified file does not exist.
    """
    if not isinstance(path, (str, os.PathLike)):
        raise TypeError(f"Expected type of path is str. Got {type(path)}.")

    logger.debug("reading yaml document %s", path)
    try:
        with open(path, "r", encoding="utf-8") as file:
            data = yaml.safe_load(file)
    except yaml.YAMLError as e:
        raise yaml.YAMLError(f"YAMLError for file path {path}: {e}") from e
    except FileNotFoundError as e:
        raise FileNotFoundError(f"Error: File '{path}' not found") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise yaml.YAMLError(
            f"YAMLError for file path {path}: top level must be a mapping"
        )
    return data
