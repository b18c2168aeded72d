"""Hankel (time-delay) DMD surrogates for nonlinear periodic trajectories."""
from .ar import ArModel, SpectralBasis, ar_fit, ar_from_basis, ar_predict, companion, fourier_coefficients, vandermonde
from .dmd import DmdModel, TruncationPolicy, fit, fit_trajectory, frequencies_mhz, load_model, predict, save_model
from .errors import DataError, HankelDmdError, NumericalError, PropagationError, TrajectoryTooShortError
from .hankel import HankelPair, build_hankel, minimal_delays
from .trajectory import Trajectory

__version__ = "0.1.0"
