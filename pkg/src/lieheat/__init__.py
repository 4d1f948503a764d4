from lieheat.catalog import *
from lieheat.utils import LieHeatError, Settings, load_settings

from lieheat.catalog import __all__ as catalog_all

__all__ = catalog_all + ["LieHeatError", "Settings", "load_settings"]
