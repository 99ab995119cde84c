"""Coupled-channel scattering of a harmonically bound pair on delta potentials."""
from .born import BornTable, born_coefficients, born_element, single_particle_RT
from .estimator import CompositeScatterer
from .exceptions import (MissingMomentError, QuadratureError, RankDeficiencyWarning, ScatteringError,
                         SingularSystemError, ThresholdWarning)
from .kinematics import (Channel, ChannelSet, IncidentSpec, SystemParams, channel_momenta,
                         critical_momentum, critical_omega, cutoff_index, total_energy)
from .matching import AmplitudeSet, MatchSystem, assemble, scattering_solution, solve
from .observables import CoefficientTable, coefficients, conservation_check, currents
from .oscillator import (MomentKey, MomentTable, MomentValue, OscillatorParams, eval_psi,
                         eval_psi_prime, moment_c, moment_d, moment_table)
from .sweep import RunConfig, SweepRow, SweepSpec, emit_csv, run_convergence, run_single, run_sweep

__version__ = "0.1.0"
