"""Continuous binomial coefficients, continuous Catalan numbers, the
continuous binomial distribution and the telegraph process."""
from ._backend import BACKEND
from .catalan_numbers import CatalanPoint, catalan, catalan_laplace, polytope_volume, schlafli_catalan, semicircle_mgf
from .binomial import AtomDensity, BinomParams, cbinom, cbinom_scaled, central_binomial
from .distribution import DistParams, cdf, mgf, moment_symmetric, normalization, pdf, quantile, sample
from .errors import ConfigurationError, ContLatticeError, ConvergenceError, DivergenceError, DomainError
from .quadrature import QuadratureSpec, integrate, quad
from .special import BesselOrder, ScaledValue, bessel_i, bessel_i_float, reduced_bessel
from .telegraph import TelegraphConfig, TelegraphSample, density, histogram_gof, simulate
from .verify import IdentityReport, run_verification_suite

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "AtomDensity", "BesselOrder", "BinomParams", "CatalanPoint", "ConfigurationError",
    "ContLatticeError", "ConvergenceError", "DistParams", "DivergenceError", "DomainError",
    "IdentityReport", "QuadratureSpec", "ScaledValue", "TelegraphConfig", "TelegraphSample",
    "bessel_i", "bessel_i_float", "catalan", "catalan_laplace", "cbinom", "cbinom_scaled", "cdf",
    "central_binomial", "density", "histogram_gof", "integrate", "mgf", "moment_symmetric", "normalization", "pdf",
    "polytope_volume", "quad", "quantile", "reduced_bessel", "run_verification_suite", "sample",
    "schlafli_catalan", "semicircle_mgf", "simulate",
]
