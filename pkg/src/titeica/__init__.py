"""Numerical verification toolkit for Titeica surfaces and their PDEs.

Modules: ``jets`` (truncated bivariate Taylor jets), ``solutions`` (closed-form
families), ``pde`` (residuals, frames, profile ODE), ``symmetry``
(prolongations, generators, adjoint action), ``variational`` (Lagrangians,
Noether currents) and ``surface`` (marching, geometry, export).
"""

from .jets import Jet2, JetDomainError, JetError

__version__ = "0.1.0"

__all__ = ["Jet2", "JetError", "JetDomainError", "__version__"]
