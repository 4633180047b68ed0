"""Exact large-N moments of Jacobi, Laguerre and delay-time beta ensembles.

Moments are computed four ways (recurrence, closed-form sums, generating
functions, weighted lattice paths) in exact rational arithmetic, and can be
checked against Metropolis sampling of the finite-N densities.
"""

__version__ = "0.1.0"

from .combinatorics import (
    Path,
    PathModel,
    Step,
    catalan,
    count_weighted_paths,
    enumerate_paths,
    motzkin_count,
    schroder,
    schroder_bijection,
)
from .ensembles import AParams, EnsembleSpec, ParameterError, a_params, transport_to_jacobi
from .exact import PowerSeries, format_rational, parse_rational, rat_make, series_div, series_mul, series_sqrt
from .genfunc import QuadraticFE, generating_function, solve_quadratic_fe
from .moments import (
    MomentResult,
    dseq_extend,
    moment,
    moment_closed_form,
    moment_paths,
    moment_recurrence,
    moment_series,
    moments_all_backends,
)
