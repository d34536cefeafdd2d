"""Unit-modulus sequence design by majorization-minimization."""
__version__ = "0.1.0"

from .corr import (NumericalConsistencyError, UnitModulusSequence, autocorrelation,
                   correlation_level, isl, lp_metric, psl, wisl)
from .seqlib import frank, golomb, random_unimodular
from .solvers import ConvergenceRecord, SolverConfig, run_solver

__all__ = [
    "ConvergenceRecord", "NumericalConsistencyError", "SolverConfig", "UnitModulusSequence",
    "autocorrelation", "correlation_level", "frank", "golomb", "isl", "lp_metric", "psl",
    "random_unimodular", "run_solver", "wisl",
]
