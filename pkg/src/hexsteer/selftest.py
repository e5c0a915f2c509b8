"""Fast consistency checks behind ``hexsteer selftest``."""

from __future__ import annotations

import math
from typing import TextIO

import numpy as np

from .config import RunConfig
from .model import CouplingStrengths, MODE_SYMMETRY, covariance, propagator, symplectic_form
from .oracle import IntegratorConfig, integrate_covariance, tmsv_steering
from .steering import Bipartition, single_mode_partitions, steerability, symplectic_eigenvalues


def _checks(c: CouplingStrengths):
    sigma = covariance(c)
    s = propagator(c)
    omega = symplectic_form()
    yield "symplectic propagator", float(np.max(np.abs(s @ omega @ s.T - omega))), 1e-10
    purity = np.linalg.eigvals(sigma.x_block() @ sigma.y_block())
    yield "purity", float(np.max(np.abs(purity - 1.0))), 1e-8
    yield "symplectic eigenvalues of pure state", float(np.max(np.abs(symplectic_eigenvalues(sigma) - 1.0))), 1e-8
    oracle = integrate_covariance(c, IntegratorConfig(step_size=1e-3))
    yield "ODE oracle agreement", float(np.max(np.abs(oracle.sigma - sigma.sigma))), 1e-6
    worst = max(abs(steerability(sigma, p) - steerability(sigma, p.relabeled(MODE_SYMMETRY)))
                for p in single_mode_partitions())
    yield "relabeling symmetry", worst, 1e-10
    r = 0.3
    tmsv = covariance(CouplingStrengths(1.0, 0.0, 0.0, r))
    yield "two-mode squeezer closed form", abs(steerability(tmsv, Bipartition.of(1, 2)) - tmsv_steering(r)), 1e-9


def run_selftest(cfg: RunConfig, out: TextIO) -> int:
    c = CouplingStrengths(cfg.g1, cfg.g2, cfg.g3, min(cfg.t, 0.5))
    failed = 0
    for name, err, tol in _checks(c):
        ok = math.isfinite(err) and err <= tol
        failed += not ok
        out.write(f"{'PASS' if ok else 'FAIL'} {name}: error {err:.3e} (tol {tol:.0e})\n")
    return 1 if failed else 0
