from lieheat.utils._yaml import *
from lieheat.utils._errors import *
from lieheat.utils._config import *

from lieheat.utils._yaml import __all__ as yaml_all
from lieheat.utils._errors import __all__ as errors_all
from lieheat.utils._config import __all__ as config_all

__all__ = yaml_all + errors_all + config_all
