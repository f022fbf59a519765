"""Solitary and standing waves of the Benney system with cubic flux."""

from .core import ComplexField, Grid, RealField
from .errors import ConfigurationError, DomainError, NumericalFailure, WavesError
from .evolution import (EnergyTrace, FieldState, SimConfig, embed, linstab_run, simulate_full,
                        step_full, step_linearized)
from .functionals import (ConstraintSpec, ModelParams, TrialPair, constraint_norm,
                          el_residual, gn_constant_check, lagrange_multiplier, tau, trial_pair)
from .io import ProfileDocument, read_profile, write_profile
from .profiles import (StandingWaveSpec, check_profile, find_phi0, shoot_traveling,
                       standing_wave, support_radius)
from .variational import (MinimizeConfig, MinimizeResult, SweepRecord, WaveProfile, minimize,
                          rearrange, sweep, symmetrize, wave_from_minimizer)

__version__ = "0.1.0"
