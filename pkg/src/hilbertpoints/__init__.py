"""Hilbert points of the Hardy spaces H^p on the polytorus T^d."""

__version__ = "0.1.0"

from . import (  # noqa: E402
    dynamics,
    fourier_tables,
    hilbert,
    khintchin,
    phi,
    polyalg,
    projection,
    quadrature,
)
from .polyalg import GaussianRational, LaurentPoly  # noqa: E402
from .quadrature import QuadratureSpec  # noqa: E402

__all__ = [
    "__version__",
    "dynamics",
    "fourier_tables",
    "hilbert",
    "khintchin",
    "phi",
    "polyalg",
    "projection",
    "quadrature",
    "GaussianRational",
    "LaurentPoly",
    "QuadratureSpec",
]
