"""Gaussian EPR steerability between groups of modes.

For a bipartite covariance ``[[A, C], [C^T, B]]`` the steerability of ``B``
by ``A`` is

    G(A -> B) = max(0, -sum_{nu_j < 1} ln nu_j),

with ``nu_j`` the symplectic eigenvalues of the Schur complement
``B - C^T A^{-1} C``.  Values are in nats; the vacuum covariance is the
identity, so a conditional eigenvalue below 1 signals steering.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Literal, Sequence

import numpy as np
from scipy import linalg

from .config import DEFAULT_TOLERANCES
from .errors import InvalidParameterError, NumericalError, PhysicalityError
from .model import MODES, CovarianceMatrix, symplectic_form

Direction = Literal["none", "one_way_a_to_b", "one_way_b_to_a", "two_way"]


def parse_modes(text: str | int | Iterable[int]) -> tuple[int, ...]:
    """Accept ``"2,3,4"``, ``"234"``, ``3`` or an iterable of ints."""
    if isinstance(text, (int, np.integer)):
        items = [int(text)]
    elif isinstance(text, str):
        s = text.strip()
        if not s:
            raise InvalidParameterError("empty mode list")
        parts = s.split(",") if "," in s else list(s)
        try:
            items = [int(p) for p in parts]
        except ValueError:
            raise InvalidParameterError(f"cannot parse mode list {text!r}") from None
    else:
        items = [int(m) for m in text]
    return tuple(items)


def _check_party(modes: tuple[int, ...], what: str) -> None:
    if not modes:
        raise InvalidParameterError(f"{what} must not be empty")
    if len(set(modes)) != len(modes):
        raise InvalidParameterError(f"{what} {modes} has duplicate modes")
    bad = [m for m in modes if m not in MODES]
    if bad:
        raise InvalidParameterError(f"{what} has modes outside 1..6: {bad}")


def party_label(modes: Sequence[int]) -> str:
    return "".join(str(m) for m in modes)


@dataclass(frozen=True)
class Bipartition:
    """Steering party ``a`` and steered party ``b``; disjoint, non-empty."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        a, b = parse_modes(self.a), parse_modes(self.b)
        _check_party(a, "steering party")
        _check_party(b, "steered party")
        if set(a) & set(b):
            raise InvalidParameterError(f"parties overlap: {a} and {b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def of(cls, a, b) -> "Bipartition":
        return cls(parse_modes(a), parse_modes(b))

    def reversed(self) -> "Bipartition":
        return Bipartition(self.b, self.a)

    def relabeled(self, mapping) -> "Bipartition":
        return Bipartition(tuple(mapping[m] for m in self.a), tuple(mapping[m] for m in self.b))

    @property
    def label(self) -> str:
        return f"{party_label(self.a)}->{party_label(self.b)}"


def reduced_cm(sigma: CovarianceMatrix, modes: Sequence[int]) -> CovarianceMatrix:
    """Covariance of the listed physical modes, in the listed order."""
    modes = parse_modes(modes)
    if not modes:
        raise InvalidParameterError("mode list must not be empty")
    if len(set(modes)) != len(modes):
        raise InvalidParameterError(f"duplicate modes in {modes}")
    try:
        positions = [sigma.modes.index(m) for m in modes]
    except ValueError:
        raise InvalidParameterError(f"modes {modes} not all present in {sigma.modes}") from None
    idx = sigma.quadrature_indices(positions)
    return CovarianceMatrix(sigma.sigma[np.ix_(idx, idx)], sigma.ordering, modes)


def schur_complement(sigma_ab: CovarianceMatrix, conditioned_on: Sequence[int]) -> CovarianceMatrix:
    """Conditional covariance of the remaining modes given ``conditioned_on``.

    Computes ``B - C^T A^{-1} C`` where ``A`` is the block of
    ``conditioned_on``.  The result covers the other modes of ``sigma_ab`` in
    their original order.  ``A`` is factorised by Cholesky; failure means the
    input is unphysical and raises :class:`PhysicalityError`.
    """
    cond = parse_modes(conditioned_on)
    _check_party(cond, "conditioning party")
    missing = [m for m in cond if m not in sigma_ab.modes]
    if missing:
        raise InvalidParameterError(f"modes {missing} not present in {sigma_ab.modes}")
    rest = tuple(m for m in sigma_ab.modes if m not in cond)
    if not rest:
        raise InvalidParameterError("conditioning on every mode leaves nothing to condition")
    ia = sigma_ab.quadrature_indices([sigma_ab.modes.index(m) for m in cond])
    ib = sigma_ab.quadrature_indices([sigma_ab.modes.index(m) for m in rest])
    s = sigma_ab.sigma
    a_blk, b_blk, c_blk = s[np.ix_(ia, ia)], s[np.ix_(ib, ib)], s[np.ix_(ia, ib)]
    try:
        factor = linalg.cho_factor(a_blk, lower=True, check_finite=True)
    except linalg.LinAlgError:
        raise PhysicalityError(f"conditioning block for modes {cond} is not positive definite") from None
    out = b_blk - c_blk.T @ linalg.cho_solve(factor, c_blk)
    return CovarianceMatrix(0.5 * (out + out.T), sigma_ab.ordering, rest)


def _require_spd(m: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.T)) > 1e-9 * scale:
        raise InvalidParameterError("matrix is not symmetric")
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        raise PhysicalityError("matrix is not positive definite") from None


def symplectic_eigenvalues(
    m: CovarianceMatrix,
    method: Literal["auto", "structured", "generic"] = "auto",
    *,
    imag_residue: float = DEFAULT_TOLERANCES.imag_residue,
) -> np.ndarray:
    """Symplectic eigenvalues of ``m`` in ascending order, one per mode.

    ``"structured"`` needs grouped ordering with vanishing X-Y correlations
    and returns ``sqrt(eig(m_X m_Y))`` via a symmetric similarity transform.
    ``"generic"`` takes ``|eig(i Omega m)|``.  ``"auto"`` picks structured
    whenever it applies.
    """
    s = m.sigma
    _require_spd(s)
    block_diagonal = m.ordering == "grouped" and not np.any(m.xy_block())
    if method == "auto":
        method = "structured" if block_diagonal else "generic"
    if method == "structured":
        if not block_diagonal:
            raise InvalidParameterError("structured path needs grouped ordering and zero X-Y block")
        chol = np.linalg.cholesky(m.x_block())
        nu_sq = np.linalg.eigvalsh(chol.T @ m.y_block() @ chol)
        return np.sqrt(np.clip(nu_sq, 0.0, None))
    if method != "generic":
        raise InvalidParameterError(f"unknown method {method!r}")
    ev = np.linalg.eigvals(1j * symplectic_form(m.n_modes, m.ordering) @ s)
    if np.max(np.abs(ev.imag)) > imag_residue * max(1.0, float(np.max(np.abs(ev)))):
        raise NumericalError("eigenvalues of i*Omega*m have a non-negligible imaginary part")
    positive = np.sort(ev.real[ev.real > 0])
    if positive.size != m.n_modes:
        raise NumericalError("symplectic spectrum is not paired as +-nu")
    return positive


def steerability_from_eigenvalues(nu: np.ndarray) -> float:
    below = nu[nu < 1.0]
    return max(0.0, float(-np.sum(np.log(below)))) if below.size else 0.0


def steerability(sigma: CovarianceMatrix, p: Bipartition) -> float:
    """``G(p.a -> p.b)`` in nats."""
    joint = reduced_cm(sigma, p.a + p.b)
    conditional = schur_complement(joint, p.a)
    return steerability_from_eigenvalues(symplectic_eigenvalues(conditional))


def classify(a_to_b: float, b_to_a: float, eps_zero: float = DEFAULT_TOLERANCES.eps_zero) -> Direction:
    forward, backward = a_to_b > eps_zero, b_to_a > eps_zero
    if forward and backward:
        return "two_way"
    if forward:
        return "one_way_a_to_b"
    if backward:
        return "one_way_b_to_a"
    return "none"


@dataclass(frozen=True)
class SteeringReport:
    partition: Bipartition
    a_to_b: float
    b_to_a: float
    direction: Direction

    @property
    def asymmetry(self) -> float:
        return self.a_to_b - self.b_to_a


def steering_report(
    sigma: CovarianceMatrix, p: Bipartition, eps_zero: float = DEFAULT_TOLERANCES.eps_zero
) -> SteeringReport:
    forward = steerability(sigma, p)
    backward = steerability(sigma, p.reversed())
    return SteeringReport(p, forward, backward, classify(forward, backward, eps_zero))


@dataclass(frozen=True, eq=False)
class SteeringTable:
    """Steerabilities keyed by party: ``values[i, j] = G(rows[i] -> cols[j])``.

    ``evaluated`` marks the cells that correspond to a requested partition;
    all other cells (overlapping parties, the diagonal) hold 0.
    """

    rows: tuple[tuple[int, ...], ...]
    cols: tuple[tuple[int, ...], ...]
    values: np.ndarray
    evaluated: np.ndarray

    @property
    def row_labels(self) -> list[str]:
        return [party_label(r) for r in self.rows]

    @property
    def col_labels(self) -> list[str]:
        return [party_label(c) for c in self.cols]

    @property
    def is_single_mode(self) -> bool:
        singles = tuple((m,) for m in MODES)
        return self.rows == singles and self.cols == singles

    def get(self, a, b) -> float:
        return float(self.values[self.rows.index(parse_modes(a)), self.cols.index(parse_modes(b))])


def single_mode_partitions() -> list[Bipartition]:
    """All ordered (1+1) pairs ``i -> j`` with ``i != j``."""
    return [Bipartition((i,), (j,)) for i, j in permutations(MODES, 2)]


def group_partitions(k: int) -> list[Bipartition]:
    """All (k+1) and (1+k) partitions: every k-mode group against every other single mode."""
    if not 1 <= k <= len(MODES) - 1:
        raise InvalidParameterError(f"group size must be in 1..5, got {k}")
    if k == 1:
        return single_mode_partitions()
    out = []
    for group in combinations(MODES, k):
        for m in MODES:
            if m not in group:
                out.append(Bipartition(group, (m,)))
                out.append(Bipartition((m,), group))
    return out


def _party_key(party: tuple[int, ...]):
    return (len(party), party)


def steering_matrix(sigma: CovarianceMatrix, partitions: Sequence[Bipartition] | None = None) -> SteeringTable:
    """Tabulate steerabilities; defaults to the 6x6 (1+1) matrix."""
    if partitions is None:
        partitions = single_mode_partitions()
        rows = cols = tuple((m,) for m in MODES)
    else:
        rows = tuple(sorted({p.a for p in partitions}, key=_party_key))
        cols = tuple(sorted({p.b for p in partitions}, key=_party_key))
    values = np.zeros((len(rows), len(cols)))
    evaluated = np.zeros((len(rows), len(cols)), dtype=bool)
    for p in partitions:
        i, j = rows.index(p.a), cols.index(p.b)
        values[i, j] = steerability(sigma, p)
        evaluated[i, j] = True
    return SteeringTable(rows, cols, values, evaluated)


def steerability_blocks(sigma_x: np.ndarray, sigma_y: np.ndarray, p: Bipartition) -> np.ndarray:
    """Vectorised ``G(p.a -> p.b)`` for stacks of block-diagonal covariances.

    ``sigma_x`` and ``sigma_y`` have shape ``(..., 6, 6)`` and hold the X and Y
    blocks of grouped-ordering covariances with no X-Y correlations (every
    state produced by the model).  Returns an array of shape ``(...)``.
    """
    ia = np.array(p.a) - 1
    ib = np.array(p.b) - 1

    def conditional(s):
        s_aa = s[..., ia[:, None], ia]
        s_ab = s[..., ia[:, None], ib]
        s_bb = s[..., ib[:, None], ib]
        out = s_bb - np.swapaxes(s_ab, -1, -2) @ np.linalg.solve(s_aa, s_ab)
        return 0.5 * (out + np.swapaxes(out, -1, -2))

    cx, cy = conditional(sigma_x), conditional(sigma_y)
    chol = np.linalg.cholesky(cx)
    nu_sq = np.linalg.eigvalsh(np.swapaxes(chol, -1, -2) @ cy @ chol)
    nu = np.sqrt(np.clip(nu_sq, np.finfo(float).tiny, None))
    contrib = np.where(nu < 1.0, -np.log(nu), 0.0)
    return np.maximum(contrib.sum(axis=-1), 0.0)
