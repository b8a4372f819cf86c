"""Dense statevector execution, exact step propagation, and seeded sampling.

The hot path applies 1- and 2-site kernels in place of full 2^n x 2^n
matrices; dense exponentials are confined to the exact-propagator oracle.
The measurement RNG is numpy's default PCG64 stream seeded explicitly; the
algorithm name is recorded in run metadata because the stream is part of
the reproducibility contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, sin

import numpy as np

from .compiler import CircuitIR, Gate, ProtocolConfig, digitize
from .config import check_dense_ok
from .ising import IsingInstance, index_to_bits
from .pauli import to_dense

RNG_NAME = "numpy-pcg64"

NORM_TOL = 1e-9


def initial_plus_state(n: int) -> np.ndarray:
    """|+>^n: uniform real amplitudes 2^(-n/2)."""
    check_dense_ok(n, "initial_plus_state")
    dim = 1 << n
    return np.full(dim, dim ** -0.5, dtype=complex)


def _rot_matrix(kind: str, theta: float) -> np.ndarray:
    c, s = cos(theta / 2.0), sin(theta / 2.0)
    if kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == "RY":
        return np.array([[c, -s], [s, c]])
    if kind == "RZ":
        return np.array([[c - 1j * s, 0.0], [0.0, c + 1j * s]])
    raise ValueError(f"not a rotation kind: {kind}")


def _apply_1q(state: np.ndarray, mat: np.ndarray, site: int, n: int) -> np.ndarray:
    st = np.moveaxis(state.reshape([2] * n), site, -1)
    st = st @ mat.T
    return np.moveaxis(st, -1, site).reshape(-1)


def _apply_zz(state: np.ndarray, theta: float, i: int, j: int, n: int) -> np.ndarray:
    st = state.reshape([2] * n).copy()
    same = np.exp(-0.5j * theta)
    diff = np.exp(0.5j * theta)
    sl: list = [slice(None)] * n
    for vi in (0, 1):
        for vj in (0, 1):
            sel = list(sl)
            sel[i], sel[j] = vi, vj
            st[tuple(sel)] *= same if vi == vj else diff
    return st.reshape(-1)


def apply_gate(state: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    for s in gate.sites:
        if not (0 <= s < n):
            raise ValueError(f"gate site {s} out of range for n={n}")
    if gate.kind == "ZZ":
        return _apply_zz(state, gate.theta, gate.sites[0], gate.sites[1], n)
    return _apply_1q(state, _rot_matrix(gate.kind, gate.theta), gate.sites[0], n)


def run_circuit(circuit: CircuitIR, state: np.ndarray) -> np.ndarray:
    """Apply the gate list in order; returns a new normalized-by-construction array."""
    if state.shape != (1 << circuit.n,):
        raise ValueError(
            f"state dimension {state.shape} does not match n={circuit.n}")
    out = np.array(state, dtype=complex, copy=True)
    for gate in circuit.gates:
        out = apply_gate(out, gate, circuit.n)
    return out


def propagate_exact(dense_h: np.ndarray, dt: float, state: np.ndarray) -> np.ndarray:
    """exp(-i H dt) |psi> through an eigendecomposition of Hermitian H."""
    evals, evecs = np.linalg.eigh(dense_h)
    return evecs @ (np.exp(-1j * evals * dt) * (evecs.conj().T @ state))


def exact_trajectory(inst: IsingInstance, cfg: ProtocolConfig) -> list[tuple[float, np.ndarray]]:
    """States after each exact step exponential, starting from |+>^n at t=0.

    This is the digitization-free reference: the same per-step generators as
    the compiled circuit, applied without product splitting.
    """
    check_dense_ok(inst.n, "exact_evolve")
    state = initial_plus_state(inst.n)
    out = [(0.0, state)]
    for k, (_, h) in enumerate(digitize(inst, cfg)):
        state = propagate_exact(to_dense(h), cfg.dt, state)
        out.append(((k + 1) * cfg.dt, state))
    return out


def exact_evolve(inst: IsingInstance, cfg: ProtocolConfig) -> np.ndarray:
    """Final state of the exact per-step propagation."""
    return exact_trajectory(inst, cfg)[-1][1]


def distribution(state: np.ndarray) -> dict[str, float]:
    """Computational-basis probabilities, keys in tensor order, zeros omitted."""
    norm = float(np.vdot(state, state).real)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state norm^2 = {norm}, expected 1 within {NORM_TOL}")
    n = int(np.log2(state.size))
    probs = np.abs(state) ** 2
    return {
        index_to_bits(i, n): float(p)
        for i, p in enumerate(probs)
        if p > 1e-16
    }


def sample(dist: dict[str, float], shots: int, seed: int) -> dict[str, int]:
    """Multinomial shot counts; a pure function of (dist, shots, seed)."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    keys = sorted(dist)
    p = np.array([dist[k] for k in keys], dtype=float)
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, p)
    return {k: int(c) for k, c in zip(keys, counts) if c > 0}


@dataclass(frozen=True)
class RunResult:
    """Everything one evolution produced, plus the config and seed that made it."""

    final_state: np.ndarray
    distribution: dict[str, float]
    shot_counts: dict[str, int] | None
    config: dict
    seed: int | None


def success_probability(result: RunResult | dict[str, float], target: str) -> float:
    """Probability mass on the target bitstring (0 when absent)."""
    dist = result.distribution if isinstance(result, RunResult) else result
    if dist:
        n = len(next(iter(dist)))
        if len(target) != n:
            raise ValueError(f"target length {len(target)} != bitstring length {n}")
    return float(dist.get(target, 0.0))


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) ** 2)
