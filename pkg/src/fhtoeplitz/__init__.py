"""Toeplitz matrices from Fisher-Hartwig symbols: spectra, asymptotics and the Wiener-Hopf route."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .symbols import SymbolKind, SymbolSpec, evaluate, evaluate_grid, validate
from .toeplitz import (DecayReport, ToeplitzMatrix, build, decay_check, densify,
                       fourier_coefficients, gamma_coefficient, matvec,
                       toeplitz_from_symbol)
from .eigen import EigenPair, full_spectrum, match, residual, subspace_overlap
from .asymptotics import (AsymptoticPrediction, CorrectionFit, eigenvalue_full,
                          eigenvalue_singular, eigenvalue_type1, eigenvalue_type2,
                          eigenvalue_type3, fit_correction, momentum, planewave,
                          predict, predicted_eigenvalue)
from .wiener_hopf import (FactorizationResult, ShiftedSymbol, cauchy_gplus,
                          eigvec_from_factorization, factorize, winding_number)
from .harness import ExperimentConfig, Report, convergence_sweep, emit, run, table_type2
