"""CP^n quantum differential equations, tt*-Toda Stokes data and solver,
Coxeter-plane combinatorics and minimal-model central charges."""

from . import coxeter, minimal, qring, stokesdata, toda
from .coxeter import coxeter_element, coxeter_plane, soliton_spectrum
from .minimal import ceff, enumerate_fixed_points
from .qring import JFunction, QuantumRing, TruncatedClass, gamma_class, qde_residual
from .stokesdata import (
    AsymptoticData,
    ConstraintViolation,
    HiggsExponents,
    higgs_to_m,
    steinberg_matrix,
    stokes_from_gamma,
    validate_gamma,
)
from .toda import NoConvergence, extract_stokes, solve_global

__version__ = "0.1.0"
