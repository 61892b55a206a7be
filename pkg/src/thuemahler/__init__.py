"""Binary forms, Thue and Thue-Mahler equations, S-units and counting experiments."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    DomainError,
    InvalidDegreeError,
    InvalidMapError,
    PrecisionError,
    UnsupportedInstanceError,
)
from .forms import BinaryForm, UnimodularMap  # noqa: F401
from .arith import PrimeSet  # noqa: F401
from .kernels import backend  # noqa: F401
