import logging
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from lieheat.utils._errors import LieHeatError
from lieheat.utils._yaml import _read_yaml

logger = logging.getLogger(__name__)

_PACKAGE_ROOT = Path(__file__).resolve().parents[2]
_DEFAULT_CONFIG = _PACKAGE_ROOT / "configs" / "lieheat.yaml"
_SEED_ENV = "LIEHEAT_SEED"


def package_path(relative: str) -> Path:
    """Resolve a path relative to the installed `lieheat` package."""
    return _PACKAGE_ROOT / relative


@dataclass(frozen=True)
class Settings:
    """
    Run-time settings of the engine.

    Attributes
    ----------
    seed : int
        Seed of the numeric zero test, ``0 <= seed < 2**64``.
    samples : int
        Number of random points per numeric zero test (at least 20).
    max_resample : int
        Retries allowed when a sample point hits a singularity.
    max_exponent : int
        Largest admissible absolute value of an integer exponent.
    jobs : int
        Worker processes for catalog verification.
    catalog : Path
        Default catalog document.
    errata : Path
        Default errata ledger.
    generic_values : dict
        Parameter name to rational value used when an invariant needs a
        parameter-free structure tensor.
    prelude : tuple of str
        Declarations every symbol table starts from.
    """

    seed: int = 20240917
    samples: int = 24
    max_resample: int = 64
    max_exponent: int = 1000
    jobs: int = 1
    catalog: Path = field(default_factory=lambda: package_path("catalog/data/tables123.cat"))
    errata: Path = field(default_factory=lambda: package_path("catalog/data/errata.yaml"))
    generic_values: dict = field(default_factory=dict)
    prelude: tuple = ()

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise LieHeatError(f"seed must satisfy 0 <= seed < 2**64. Got {self.seed}.")
        if self.samples < 20:
            raise LieHeatError(f"at least 20 samples are required. Got {self.samples}.")
        if self.jobs < 1:
            raise LieHeatError(f"jobs must be positive. Got {self.jobs}.")

    def with_seed(self, seed: int | None) -> "Settings":
        """Return a copy with ``seed`` replaced, unless it is None."""
        if seed is None:
            return self
        return replace(self, seed=seed)


def _to_path(value: str) -> Path:
    path = Path(value)
    return path if path.is_absolute() else package_path(value)


def load_settings(path: str | None = None, env: dict | None = None) -> Settings:
    """
    Build the settings from the YAML configuration and the environment.

    Precedence of the seed is ``--seed`` (applied by the caller through
    `Settings.with_seed`), then ``LIEHEAT_SEED``, then the file.

    Parameters
    ----------
    path : str or None, optional
        Configuration file. Default is the packaged ``configs/lieheat.yaml``.
    env : dict or None, optional
        Environment mapping. Default is ``os.environ``.

    Returns
    -------
    Settings
        Validated settings.

    Raises
    ------
    LieHeatError
        If the configuration has no ``LIEHEAT`` section or a value is invalid.
    """
    config_path = str(path) if path is not None else str(_DEFAULT_CONFIG)
    env = os.environ if env is None else env

    config = _read_yaml(config_path)
    section = config.get("LIEHEAT")
    if not isinstance(section, dict):
        raise LieHeatError(f"Can not find LIEHEAT section in config file {config_path}.")

    seed = section.get("seed", Settings.seed)
    if env.get(_SEED_ENV):
        try:
            seed = int(env[_SEED_ENV])
        except ValueError as e:
            raise LieHeatError(f"{_SEED_ENV} must be an integer. Got {env[_SEED_ENV]!r}.") from e

    generic = {
        str(name): Fraction(str(value))
        for name, value in (section.get("generic_values") or {}).items()
    }
    settings = Settings(
        seed=int(seed),
        samples=int(section.get("samples", Settings.samples)),
        max_resample=int(section.get("max_resample", Settings.max_resample)),
        max_exponent=int(section.get("max_exponent", Settings.max_exponent)),
        jobs=int(section.get("jobs", Settings.jobs)),
        catalog=_to_path(section.get("catalog", "catalog/data/tables123.cat")),
        errata=_to_path(section.get("errata", "catalog/data/errata.yaml")),
        generic_values=generic,
        prelude=tuple(config.get("PRELUDE") or ()),
    )
    logger.debug("settings loaded from %s with seed %d", config_path, settings.seed)
    return settings
