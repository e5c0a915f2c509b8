"""Six-mode four-wave mixing with a spatially structured pump.

The interaction couples six output beams through seven two-mode squeezing
terms ``eps * a_i^dag a_j^dag + h.c.``.  With quadratures ``X = a + a^dag`` and
``Y = i (a^dag - a)`` the Heisenberg equations split into

    dX/dt =  A_X X,        dY/dt = -A_X Y,

where ``A_X`` is the real symmetric 6x6 adjacency matrix of the coupling
graph.  The evolution is therefore ``S = diag(exp(A_X t), exp(-A_X t))`` and
the vacuum input (covariance = identity) evolves to ``sigma = S S^T``.

Mode labels are 1-based throughout the public API.  Probe beams are 2, 3, 4
and conjugate beams are 1, 5, 6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Literal

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import InvalidParameterError, NumericalError

N_MODES = 6
MODES = tuple(range(1, N_MODES + 1))
PROBE_MODES = (2, 3, 4)
CONJUGATE_MODES = (1, 5, 6)
PARAMETERS = ("g1", "g2", "g3", "t")

# (mode_i, mode_j, strength name); single-pump processes carry g1 (pump 1) and
# g2 (pump 2), double-pump processes carry g3.
EDGES = (
    (1, 2, "g1"),
    (3, 5, "g1"),
    (1, 4, "g2"),
    (3, 6, "g2"),
    (1, 3, "g3"),
    (4, 5, "g3"),
    (2, 6, "g3"),
)

# Relabeling that maps the coupling graph onto itself.
MODE_SYMMETRY = {1: 3, 3: 1, 2: 5, 5: 2, 4: 6, 6: 4}

Ordering = Literal["grouped", "interleaved"]


@dataclass(frozen=True)
class CouplingStrengths:
    """Interaction strengths of the three pump channels and the interaction time."""

    g1: float
    g2: float
    g3: float
    t: float = 0.3

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise InvalidParameterError(f"{f.name} must be a real number, got {value!r}") from None
            if not math.isfinite(value) or value < 0:
                raise InvalidParameterError(f"{f.name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, f.name, value)

    def with_value(self, name: str, value: float) -> "CouplingStrengths":
        if name not in PARAMETERS:
            raise InvalidParameterError(f"unknown parameter {name!r}")
        return replace(self, **{name: value})

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in PARAMETERS}


VACUUM = CouplingStrengths(0.0, 0.0, 0.0, 0.0)


def build_coupling_matrix(c: CouplingStrengths) -> np.ndarray:
    """Symmetric 6x6 adjacency matrix ``A_X`` of the coupling graph.

    Entry ``(i-1, j-1)`` holds the strength of the process producing modes
    ``i`` and ``j``; the diagonal is zero.
    """
    if not isinstance(c, CouplingStrengths):
        raise InvalidParameterError(f"expected CouplingStrengths, got {type(c).__name__}")
    a = np.zeros((N_MODES, N_MODES))
    for i, j, name in EDGES:
        a[i - 1, j - 1] = a[j - 1, i - 1] = getattr(c, name)
    return a


def symplectic_form(n_modes: int = N_MODES, ordering: Ordering = "grouped") -> np.ndarray:
    """``Omega`` such that ``[xi_k, xi_l] = 2i Omega_kl`` for the given ordering."""
    if ordering == "grouped":
        eye = np.eye(n_modes)
        zero = np.zeros((n_modes, n_modes))
        return np.block([[zero, eye], [-eye, zero]])
    if ordering == "interleaved":
        return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    raise InvalidParameterError(f"unknown ordering {ordering!r}")


def _checked_eigh(a: np.ndarray, rel_tol: float) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(a)
    scale = max(1.0, float(np.max(np.abs(a))))
    residual = float(np.max(np.abs(a @ v - v * w)))
    if residual > rel_tol * scale:
        raise NumericalError(f"eigendecomposition residual {residual:.3e} exceeds {rel_tol * scale:.3e}")
    return w, v


def propagator(c: CouplingStrengths, *, rel_tol: float = DEFAULT_TOLERANCES.eig_residual) -> np.ndarray:
    """12x12 symplectic evolution matrix in grouped ordering (X1..X6, Y1..Y6).

    The exponentials are taken through the orthogonal eigendecomposition of
    ``A_X``, so ``exp(A_X t)`` and ``exp(-A_X t)`` are exact inverses up to
    eigensolver round-off.
    """
    w, v = _checked_eigh(build_coupling_matrix(c), rel_tol)
    if c.t == 0.0:
        return np.eye(2 * N_MODES)
    sx = (v * np.exp(w * c.t)) @ v.T
    sy = (v * np.exp(-w * c.t)) @ v.T
    s = np.zeros((2 * N_MODES, 2 * N_MODES))
    s[:N_MODES, :N_MODES] = sx
    s[N_MODES:, N_MODES:] = sy
    return s


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Quadrature covariance matrix of an ``n``-mode Gaussian state.

    ``ordering`` is ``"grouped"`` for (X1..Xn, Y1..Yn) or ``"interleaved"``
    for (X1, Y1, ..., Xn, Yn).  ``modes`` records which physical modes the
    rows describe, in order; the vacuum has ``sigma = I``.
    """

    sigma: np.ndarray
    ordering: Ordering = "grouped"
    modes: tuple[int, ...] = MODES

    def __post_init__(self):
        sigma = np.array(self.sigma, dtype=float)
        if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
            raise InvalidParameterError(f"covariance must be square with even dimension, got {sigma.shape}")
        if sigma.shape[0] != 2 * len(self.modes):
            raise InvalidParameterError("covariance dimension does not match the number of modes")
        if self.ordering not in ("grouped", "interleaved"):
            raise InvalidParameterError(f"unknown ordering {self.ordering!r}")
        sigma.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "modes", tuple(int(m) for m in self.modes))

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def quadrature_indices(self, positions) -> np.ndarray:
        """Row indices of both quadratures for the modes at ``positions`` (0-based)."""
        n = self.n_modes
        positions = list(positions)
        if self.ordering == "grouped":
            return np.array(positions + [n + p for p in positions], dtype=int)
        return np.array([2 * p + q for p in positions for q in (0, 1)], dtype=int)

    def x_block(self) -> np.ndarray:
        if self.ordering == "grouped":
            n = self.n_modes
            return self.sigma[:n, :n]
        return self.sigma[0::2, 0::2]

    def y_block(self) -> np.ndarray:
        if self.ordering == "grouped":
            n = self.n_modes
            return self.sigma[n:, n:]
        return self.sigma[1::2, 1::2]

    def xy_block(self) -> np.ndarray:
        if self.ordering == "grouped":
            n = self.n_modes
            return self.sigma[:n, n:]
        return self.sigma[0::2, 1::2]


def covariance(c: CouplingStrengths, *, rel_tol: float = DEFAULT_TOLERANCES.eig_residual) -> CovarianceMatrix:
    """Output covariance ``S S^T`` for vacuum input, grouped ordering."""
    s = propagator(c, rel_tol=rel_tol)
    sigma = s @ s.T
    return CovarianceMatrix(0.5 * (sigma + sigma.T), "grouped")


def _interleave_permutation(n_modes: int) -> np.ndarray:
    # perm[k] = grouped index that lands at interleaved position k
    return np.array([p + q * n_modes for p in range(n_modes) for q in (0, 1)], dtype=int)


def reorder(sigma: CovarianceMatrix, target: Ordering) -> CovarianceMatrix:
    """Return ``sigma`` expressed in ``target`` ordering (no-op if already there)."""
    if target not in ("grouped", "interleaved"):
        raise InvalidParameterError(f"unknown ordering {target!r}")
    if sigma.ordering == target:
        return sigma
    perm = _interleave_permutation(sigma.n_modes)
    if target == "grouped":
        perm = np.argsort(perm)
    return CovarianceMatrix(sigma.sigma[np.ix_(perm, perm)], target, sigma.modes)


def relabel_permutation(mapping=MODE_SYMMETRY, ordering: Ordering = "grouped") -> np.ndarray:
    """12x12 permutation matrix ``P`` with ``(P sigma P^T)`` relabeled by ``mapping``."""
    n = N_MODES
    p = np.zeros((2 * n, 2 * n))
    for m in MODES:
        target = mapping.get(m, m)
        for q in (0, 1):
            if ordering == "grouped":
                p[q * n + target - 1, q * n + m - 1] = 1.0
            else:
                p[2 * (target - 1) + q, 2 * (m - 1) + q] = 1.0
    return p


def covariance_blocks(g1, g2, g3, t) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised X and Y covariance blocks over broadcast parameter arrays.

    Returns ``(sigma_x, sigma_y)`` with shape ``broadcast_shape + (6, 6)``,
    equal to ``exp(2 A_X t)`` and ``exp(-2 A_X t)``.  Inputs are not validated
    beyond broadcasting; callers build them from validated axes.
    """
    g1, g2, g3, t = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (g1, g2, g3, t)))
    strengths = {"g1": g1, "g2": g2, "g3": g3}
    a = np.zeros(g1.shape + (N_MODES, N_MODES))
    for i, j, name in EDGES:
        a[..., i - 1, j - 1] = a[..., j - 1, i - 1] = strengths[name]
    w, v = np.linalg.eigh(a)
    vt = np.swapaxes(v, -1, -2)
    decay = 2.0 * w * t[..., None]
    sigma_x = (v * np.exp(decay)[..., None, :]) @ vt
    sigma_y = (v * np.exp(-decay)[..., None, :]) @ vt
    # exact identity at t = 0, as in propagator()
    frozen = (t == 0.0)[..., None, None]
    eye = np.eye(N_MODES)
    return np.where(frozen, eye, sigma_x), np.where(frozen, eye, sigma_y)
