"""Difference families in Z_2 x GF(q^2) and the Hadamard matrices built from them."""

from .constructions import build_family, derive_params
from .cyclotomy import make_cyclo_ctx
from .field import build_field, make_prime_power

__all__ = ["build_family", "build_field", "derive_params", "make_cyclo_ctx", "make_prime_power"]
__version__ = "0.1.0"
