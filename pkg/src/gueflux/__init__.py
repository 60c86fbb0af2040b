"""GUE eigenvalue fluctuation fields, their Chebyshev coefficients and log-correlated limit."""

from gueflux.chebyshev import ChebCoeffSeq, kernel_closed, kernel_series
from gueflux.errors import ConvergenceError, DomainError, QuadratureError, ResourceLimitError, SingularInputError
from gueflux.field import (FluctuationField, CountingField, build_counting_field, build_field, field_coeffs,
                           field_eval, sobolev_norm)
from gueflux.gue import Spectrum, counting_function, sample_dense, sample_tridiag
from gueflux.harness import EnsembleSummary, ExperimentConfig, run_ensemble
from gueflux.kernels import BACKEND
from gueflux.limit import LimitFieldSample, limit_cov, limit_eval, sample_limit
from gueflux.moments import MomentTable, expected_cheb_trace, expected_power_trace, harer_zagier
from gueflux.semicircle import SemicirclePartition, build_partition, cdf, density, quantile

__version__ = "0.1.0"
