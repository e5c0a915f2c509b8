"""Independent reference paths used to cross-check the spectral model.

``integrate_covariance`` never touches an eigendecomposition: it integrates
the moment equation ``d sigma/dt = M sigma + sigma M^T`` with a classical
fixed-step Runge-Kutta scheme, where ``M = diag(A_X, -A_X)`` is the
quadrature generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .model import N_MODES, CouplingStrengths, CovarianceMatrix, build_coupling_matrix


@dataclass(frozen=True)
class IntegratorConfig:
    step_size: float = 1e-4
    t_final: float | None = None  # None: use the interaction time of the strengths

    def __post_init__(self):
        if not (math.isfinite(self.step_size) and self.step_size > 0):
            raise InvalidParameterError(f"step_size must be > 0, got {self.step_size!r}")
        if self.t_final is not None and not (math.isfinite(self.t_final) and self.t_final >= 0):
            raise InvalidParameterError(f"t_final must be >= 0, got {self.t_final!r}")


def quadrature_generator(c: CouplingStrengths) -> np.ndarray:
    a = build_coupling_matrix(c)
    m = np.zeros((2 * N_MODES, 2 * N_MODES))
    m[:N_MODES, :N_MODES] = a
    m[N_MODES:, N_MODES:] = -a
    return m


def integrate_covariance(c: CouplingStrengths, cfg: IntegratorConfig = IntegratorConfig()) -> CovarianceMatrix:
    """Covariance at ``cfg.t_final`` (default ``c.t``) by RK4 from the vacuum.

    The step is shrunk so that an integer number of steps lands exactly on
    ``t_final``; the state is symmetrised after every step.
    """
    t_final = c.t if cfg.t_final is None else cfg.t_final
    m = quadrature_generator(c)
    sigma = np.eye(2 * N_MODES)
    n_steps = math.ceil(t_final / cfg.step_size - 1e-12) if t_final > 0 else 0
    if n_steps == 0:
        return CovarianceMatrix(sigma, "grouped")
    h = t_final / n_steps

    def rhs(s):
        ms = m @ s
        return ms + ms.T

    for _ in range(n_steps):
        k1 = rhs(sigma)
        k2 = rhs(sigma + 0.5 * h * k1)
        k3 = rhs(sigma + 0.5 * h * k2)
        k4 = rhs(sigma + h * k3)
        sigma = sigma + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        sigma = 0.5 * (sigma + sigma.T)
    return CovarianceMatrix(sigma, "grouped")


def tmsv_covariance(r: float) -> np.ndarray:
    """4x4 grouped covariance (X1, X2, Y1, Y2) of a two-mode squeezed vacuum with squeezing ``2r``."""
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    return np.array([
        [ch, sh, 0.0, 0.0],
        [sh, ch, 0.0, 0.0],
        [0.0, 0.0, ch, -sh],
        [0.0, 0.0, -sh, ch],
    ])


def tmsv_steering(r: float) -> float:
    """Steerability of either mode of a two-mode squeezed vacuum, ``ln cosh(2r)``.

    ``r`` is the product of coupling strength and interaction time.
    """
    if not (math.isfinite(r) and r >= 0):
        raise InvalidParameterError(f"squeezing must be finite and >= 0, got {r!r}")
    return math.log(math.cosh(2.0 * r))
