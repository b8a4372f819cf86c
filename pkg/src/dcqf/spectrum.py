"""Instantaneous spectra along the protocol and the minimum gap.

Eigenvalues come from a dense Hermitian eigensolver; the gap is E1 - E0 of
the sorted spectrum even when the ground level is degenerate, with the
degeneracy count reported alongside.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .agp import CDVariant, adiabatic_hamiltonian, total_hamiltonian
from .compiler import ProtocolConfig
from .config import check_dense_ok
from .ising import IsingInstance
from .pauli import to_dense
from .schedule import lambda_value
from .simulator import exact_trajectory

SPECTRUM_QUBIT_LIMIT = 12
DEGENERACY_RTOL = 1e-9


@dataclass(frozen=True)
class SpectrumRow:
    t: float
    lam: float
    levels: tuple[float, ...]
    gap: float


@dataclass(frozen=True)
class SpectrumReport:
    mode: str
    variant: CDVariant
    T: float
    rows: tuple[SpectrumRow, ...]
    min_gap: float
    min_gap_t: float
    min_gap_lambda: float
    ground_degeneracy: int


def _check_size(inst: IsingInstance, what: str) -> None:
    if inst.n > SPECTRUM_QUBIT_LIMIT:
        raise ValueError(f"{what} supports n <= {SPECTRUM_QUBIT_LIMIT}, got n={inst.n}")
    check_dense_ok(inst.n, what)


def instantaneous_spectrum(inst: IsingInstance, cfg: ProtocolConfig,
                           grid_points: int, m: int) -> SpectrumReport:
    """Lowest m levels of the time-dependent generator on a uniform t-grid.

    The grid includes both endpoints, so the lambda column runs exactly from
    0 to 1.  The minimum gap is taken over the grid; ties resolve to the
    earliest time.
    """
    _check_size(inst, "instantaneous_spectrum")
    if grid_points < 2:
        raise ValueError(f"grid_points must be >= 2, got {grid_points}")
    if m < 1:
        raise ValueError(f"level count must be >= 1, got {m}")
    m = min(m, 1 << inst.n)
    rows = []
    best = None
    for g in range(grid_points):
        t = cfg.T * g / (grid_points - 1)
        h = total_hamiltonian(inst, t, cfg.T, cfg.mode, cfg.variant)
        evals = np.linalg.eigvalsh(to_dense(h))
        gap = float(evals[1] - evals[0]) if evals.size > 1 else 0.0
        row = SpectrumRow(t=t, lam=lambda_value(t, cfg.T),
                          levels=tuple(float(e) for e in evals[:m]), gap=gap)
        rows.append(row)
        if best is None or gap < best[0]:
            scale = max(1.0, abs(float(evals[0])))
            degeneracy = int(np.sum(evals - evals[0] <= DEGENERACY_RTOL * scale))
            best = (gap, row.t, row.lam, degeneracy)
    return SpectrumReport(
        mode=cfg.mode, variant=cfg.variant, T=cfg.T, rows=tuple(rows),
        min_gap=best[0], min_gap_t=best[1], min_gap_lambda=best[2],
        ground_degeneracy=best[3],
    )


def report_to_csv(report: SpectrumReport) -> str:
    m = len(report.rows[0].levels)
    header = "t,lambda," + ",".join(f"E{i}" for i in range(m)) + ",gap"
    lines = [header]
    for row in report.rows:
        cells = [repr(row.t), repr(row.lam)]
        cells += [repr(e) for e in row.levels]
        cells.append(repr(row.gap))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def ground_overlap_track(inst: IsingInstance, cfg: ProtocolConfig,
                         grid_points: int) -> list[tuple[float, float]]:
    """Overlap of the exactly evolved state with the instantaneous ground space.

    The state follows the exact per-step propagator with one step per grid
    interval; the reference is the ground space of the bare interpolating
    Hamiltonian at lambda(t), summed over degenerate levels when present.
    """
    _check_size(inst, "ground_overlap_track")
    if grid_points < 2:
        raise ValueError(f"grid_points must be >= 2, got {grid_points}")
    fine = replace(cfg, dt=cfg.T / (grid_points - 1))
    out = []
    for t, state in exact_trajectory(inst, fine):
        h = to_dense(adiabatic_hamiltonian(inst, lambda_value(t, cfg.T)))
        evals, evecs = np.linalg.eigh(h)
        scale = max(1.0, abs(float(evals[0])))
        ground = evecs[:, evals - evals[0] <= DEGENERACY_RTOL * scale]
        overlap = float(np.sum(np.abs(ground.conj().T @ state) ** 2))
        out.append((t, overlap))
    return out
