"""Function inversion with preprocessing: inverter models, GF(p) linear
algebra, the set-disjointness reduction and bound verifiers."""

__version__ = "0.1.0"

from .errors import FnInvError  # noqa: E402
from .field import FnTable, PrimeField, make_field  # noqa: E402
from .kernels import BACKEND  # noqa: E402
from .rng import Rng  # noqa: E402

__all__ = ["BACKEND", "FnInvError", "FnTable", "PrimeField", "Rng", "__version__", "make_field"]
