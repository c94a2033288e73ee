from . import core
from . import subspaces
from . import compat
from . import spectra
from . import schatten
from . import formats
from . import sampling
from . import studies
from . import suites
from . import utils

__version__ = "0.1.0"
