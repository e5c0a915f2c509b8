"""Tolerances and run configuration.

Every numerical threshold used by the library lives in :class:`Tolerances`;
the CLI builds one from a flat JSON document (see :class:`RunConfig`).
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

from .errors import InvalidParameterError

CONFIG_ENV_VAR = "HEXSTEER_CONFIG"


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds.

    Attributes:
        eps_zero: steerabilities at or below this count as zero when
            classifying direction and checking monogamy.
        eps_region: zero test for the sub-party witnesses of a collective
            steering check (looser, since exact zeros are only approached).
        eig_residual: relative residual allowed for the symmetric
            eigendecomposition of the coupling matrix.
        imag_residue: largest imaginary part tolerated in eigenvalues of
            ``i * Omega * m`` on the generic symplectic-eigenvalue path.
        threshold_tol: absolute bracket width at which bisection stops.
    """

    eps_zero: float = 1e-9
    eps_region: float = 1e-6
    eig_residual: float = 1e-10
    imag_residue: float = 1e-8
    threshold_tol: float = 1e-4

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                raise InvalidParameterError(f"tolerance {f.name} must be > 0, got {value!r}")


DEFAULT_TOLERANCES = Tolerances()


@dataclass
class RunConfig:
    """Everything a CLI invocation needs besides the subcommand's own flags."""

    g1: float = 1.0
    g2: float = 1.2
    g3: float = 2.0
    t: float = 0.3
    eps_zero: float = DEFAULT_TOLERANCES.eps_zero
    eps_region: float = DEFAULT_TOLERANCES.eps_region
    eig_residual: float = DEFAULT_TOLERANCES.eig_residual
    imag_residue: float = DEFAULT_TOLERANCES.imag_residue
    threshold_tol: float = DEFAULT_TOLERANCES.threshold_tol
    resolution: int = 201
    sweep_steps: int = 201
    out: str | None = None
    format: str = "csv"
    # keys explicitly set by a config file or a flag, as opposed to defaults
    explicit: frozenset = field(default_factory=frozenset, compare=False, repr=False)

    def __post_init__(self):
        if self.resolution < 2 or self.sweep_steps < 2:
            raise InvalidParameterError("grid resolutions must be >= 2")
        if self.format not in ("csv", "json"):
            raise InvalidParameterError(f"format must be 'csv' or 'json', got {self.format!r}")
        self.tolerances  # validates every tolerance

    @property
    def tolerances(self) -> Tolerances:
        return Tolerances(
            eps_zero=self.eps_zero,
            eps_region=self.eps_region,
            eig_residual=self.eig_residual,
            imag_residue=self.imag_residue,
            threshold_tol=self.threshold_tol,
        )

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls) if f.name != "explicit"]

    @classmethod
    def from_sources(cls, path: str | os.PathLike | None = None, **overrides: Any) -> "RunConfig":
        """Merge defaults, a JSON config file and explicit overrides.

        ``path`` falls back to the ``HEXSTEER_CONFIG`` environment variable.
        Overrides whose value is ``None`` are ignored, so argparse namespaces
        can be passed straight through.
        """
        if path is None:
            path = os.environ.get(CONFIG_ENV_VAR) or None
        values: dict[str, Any] = {}
        if path is not None:
            values.update(load_config_file(path))
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values, explicit=frozenset(values))

    def replace(self, **changes: Any) -> "RunConfig":
        return dataclasses.replace(self, **changes)


def load_config_file(path: str | os.PathLike) -> dict[str, Any]:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise InvalidParameterError(f"config file {path} must hold a JSON object")
    known = set(RunConfig.field_names())
    unknown = sorted(set(data) - known)
    if unknown:
        raise InvalidParameterError(f"unknown config keys in {path}: {', '.join(unknown)}")
    return data
