"""Gaussian EPR steering among the six output beams of four-wave mixing with a
spatially structured pump."""

from .analysis import (
    TABLE2,
    Axis,
    CollectiveSpec,
    MonogamyInstance,
    RegionGrid,
    SweepSpec,
    collective_check,
    collective_region_scan,
    find_threshold,
    monogamy_eval,
    monogamy_region_scan,
    sweep,
)
from .config import RunConfig, Tolerances
from .errors import (
    AmbiguousThresholdError,
    HexsteerError,
    InvalidParameterError,
    NumericalError,
    PhysicalityError,
)
from .model import (
    CouplingStrengths,
    CovarianceMatrix,
    build_coupling_matrix,
    covariance,
    propagator,
    reorder,
)
from .oracle import IntegratorConfig, integrate_covariance, tmsv_steering
from .steering import (
    Bipartition,
    SteeringReport,
    reduced_cm,
    schur_complement,
    steerability,
    steering_matrix,
    steering_report,
    symplectic_eigenvalues,
)

__version__ = "0.1.0"
