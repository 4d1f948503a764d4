"""
Unit tests for the `_read_yaml` module.
"""

import pytest
import yaml

from lieheat.utils import _read_yaml


def test_read_yaml_mapping(tmp_path):
    """
    Test the `_read_yaml` function on a small configuration document.
    """
    path = tmp_path / "config.yaml"
    path.write_text("LIEHEAT:\n  seed: 7\n  samples: 30\n", encoding="utf-8")
    assert _read_yaml(str(path)) == {"LIEHEAT": {"seed": 7, "samples": 30}}


def test_read_yaml_accepts_path_objects(tmp_path):
    """
    Test the `_read_yaml` function with a `pathlib.Path` argument.
    """
    path = tmp_path / "config.yaml"
    path.write_text("ERRATA: []\n", encoding="utf-8")
    assert _read_yaml(path) == {"ERRATA": []}


def test_read_yaml_empty_document(tmp_path):
    """
    Test the `_read_yaml` function on an empty file, which yields an empty dict.
    """
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    assert _read_yaml(str(path)) == {}


def test_read_yaml_wrong_type():
    """
    Test the `_read_yaml` function with a path that is not a string.
    """
    with pytest.raises(TypeError, match="Expected type of path is str"):
        _read_yaml(42)


def test_read_yaml_missing_file(tmp_path):
    """
    Test the `_read_yaml` function with a file that does not exist.
    """
    with pytest.raises(FileNotFoundError, match="not found"):
        _read_yaml(str(tmp_path / "missing.yaml"))


def test_read_yaml_invalid_document(tmp_path):
    """
    Test the `_read_yaml` function on malformed YAML and on a top-level list.
    """
    broken = tmp_path / "broken.yaml"
    broken.write_text("LIEHEAT: [1, 2\n", encoding="utf-8")
    with pytest.raises(yaml.YAMLError):
        _read_yaml(str(broken))

    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(yaml.YAMLError, match="top level must be a mapping"):
        _read_yaml(str(listing))
