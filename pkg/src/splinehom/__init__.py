"""Exact dimensions and Hilbert polynomials of spline spaces on polyhedral fans."""

from .algebra import *  # noqa: F401,F403
from .chain import *  # noqa: F401,F403
from .complex import *  # noqa: F401,F403
from .hilbert import *  # noqa: F401,F403
from .io import *  # noqa: F401,F403
from .lattice import *  # noqa: F401,F403

from . import algebra, chain, complex, hilbert, io, lattice

__all__ = (algebra.__all__ + chain.__all__ + complex.__all__ + hilbert.__all__
           + io.__all__ + lattice.__all__)
__version__ = "0.1.0"
