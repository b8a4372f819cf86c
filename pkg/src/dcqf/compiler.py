"""Digitize a protocol into per-step generators and lower them to native gates.

Native set and angle conventions (part of the reproducibility contract):

* R_P(theta) = exp(-i theta P / 2) for P in {X, Y, Z};
  ZZ(theta) = exp(-i theta Z(x)Z / 2).
* A term c * P evolved for one step of length dt becomes one gate of angle
  theta = 2 c dt.
* Term order within a step: X singles, Z singles, ZZ pairs (lexicographic),
  Y singles, then mixed ZY/YZ pairs.  Identity terms contribute only a
  global phase and are skipped.

Per-step coefficient sampling:

* ``integral`` (default): each step uses the time average of the exact
  generator over the step, computed with fixed-order Gauss-Legendre
  quadrature.  This is the only convention that survives the stiff
  early-time boundary layer of strongly biased instances at four-step
  resolution.
* ``midpoint`` / ``left``: point evaluation at (k+1/2) dt or k dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import agp
from .agp import CDVariant
from .ising import IsingInstance, to_hamiltonian
from .pauli import PauliString, PauliSum

GATE_KINDS = ("RX", "RY", "RZ", "ZZ")
SAMPLINGS = ("integral", "midpoint", "left")

QUAD_ORDER = 64

CONVENTIONS = {
    "rotation": "R_P(theta) = exp(-i theta P / 2)",
    "zz": "ZZ(theta) = exp(-i theta ZZ / 2)",
    "step_angle": "theta = 2 * coefficient * dt",
    "term_order": "X, Z, ZZ, Y, ZY/YZ",
    "tensor_order": "site 0 is the most significant factor",
    "bit_zero": "+1 eigenvalue of Z",
}


class CompileError(ValueError):
    """A Pauli term outside the supported gate set, or a malformed config."""


@dataclass(frozen=True)
class ProtocolConfig:
    """Evolution recipe: mode, CD variant, timing, sampling, and circuit trims."""

    mode: str = "full-cd"
    variant: CDVariant = CDVariant()
    T: float = 0.4
    dt: float = 0.1
    sampling: str = "integral"
    prune_threshold: float = 0.0
    truncate_2local: int | None = None

    def __post_init__(self):
        if self.mode not in agp.MODES:
            raise ValueError(f"mode must be one of {agp.MODES}, got {self.mode!r}")
        if self.sampling not in SAMPLINGS:
            raise ValueError(f"sampling must be one of {SAMPLINGS}, got {self.sampling!r}")
        if self.T <= 0 or self.dt <= 0:
            raise ValueError(f"T and dt must be positive, got T={self.T}, dt={self.dt}")
        steps = self.T / self.dt
        if abs(steps - round(steps)) > 1e-9 or round(steps) < 1:
            raise ValueError(f"T/dt must be a positive integer, got {steps}")
        if self.prune_threshold < 0:
            raise ValueError(f"prune threshold must be >= 0, got {self.prune_threshold}")
        if self.truncate_2local is not None and self.truncate_2local < 0:
            raise ValueError(f"truncate_2local must be >= 0, got {self.truncate_2local}")

    @property
    def steps(self) -> int:
        return int(round(self.T / self.dt))


@dataclass(frozen=True)
class Gate:
    kind: str
    sites: tuple[int, ...]
    theta: float

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"gate kind must be one of {GATE_KINDS}, got {self.kind!r}")
        want = 2 if self.kind == "ZZ" else 1
        if len(self.sites) != want or len(set(self.sites)) != want:
            raise ValueError(f"{self.kind} needs {want} distinct site(s), got {self.sites}")


@dataclass(frozen=True)
class CircuitIR:
    """Ordered native-gate list with per-gate provenance.

    ``meta`` parallels ``gates``; each entry records the Trotter step index
    (None for hand-built circuits) and the source Pauli term label.
    ``removed`` accumulates gates dropped by pruning.
    """

    n: int
    gates: tuple[Gate, ...] = ()
    meta: tuple[dict, ...] = ()
    removed: tuple[dict, ...] = ()

    def __post_init__(self):
        if self.meta and len(self.meta) != len(self.gates):
            raise ValueError("meta must parallel gates")
        if not self.meta:
            object.__setattr__(self, "meta", tuple({} for _ in self.gates))
        for g in self.gates:
            if any(s >= self.n or s < 0 for s in g.sites):
                raise ValueError(f"gate {g} touches a site outside 0..{self.n - 1}")


def _gauss_rule(a: float, b: float, order: int = QUAD_ORDER) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return a + (x + 1.0) * (b - a) / 2.0, w * (b - a) / 2.0


def _step_generator(inst: IsingInstance, cfg: ProtocolConfig, k: int) -> PauliSum:
    """Effective generator of step k under the configured sampling.

    The 2-local truncation, when set, trims the driving term only; problem
    couplings are never dropped.
    """
    from .schedule import lambda_dot, lambda_value

    t0 = k * cfg.dt
    if cfg.sampling == "integral":
        ts, ws = _gauss_rule(t0, t0 + cfg.dt)
        wx = float(np.sum(ws * (1.0 - np.array([lambda_value(t, cfg.T) for t in ts])))) / cfg.dt
        wz = float(np.sum(ws * np.array([lambda_value(t, cfg.T) for t in ts]))) / cfg.dt
        cd = PauliSum.zero(inst.n)
        if cfg.mode != "adiabatic":
            for t, w in zip(ts, ws):
                ld = lambda_dot(t, cfg.T)
                if ld == 0.0:
                    continue
                cd = cd + (w * ld / cfg.dt) * agp.cd_generator(
                    inst, lambda_value(t, cfg.T), cfg.variant)
    else:
        t_eval = t0 + 0.5 * cfg.dt if cfg.sampling == "midpoint" else t0
        lam = lambda_value(t_eval, cfg.T)
        wx, wz = 1.0 - lam, lam
        cd = PauliSum.zero(inst.n)
        if cfg.mode != "adiabatic":
            cd = lambda_dot(t_eval, cfg.T) * agp.cd_generator(inst, lam, cfg.variant)
    if cfg.truncate_2local is not None:
        cd = truncate_2local(cd, cfg.truncate_2local)
    if cfg.mode == "impulse":
        return cd
    return wx * agp.initial_hamiltonian(inst.n) + wz * to_hamiltonian(inst) + cd


def digitize(inst: IsingInstance, cfg: ProtocolConfig) -> list[tuple[float, PauliSum]]:
    """Per-step (t_k, generator) pairs; K = T/dt entries.

    t_k labels the step: (k+1/2) dt for midpoint and integral sampling,
    k dt for left sampling.
    """
    out = []
    for k in range(cfg.steps):
        t_label = k * cfg.dt if cfg.sampling == "left" else (k + 0.5) * cfg.dt
        out.append((t_label, _step_generator(inst, cfg, k)))
    return out


def _real_coeff(s: PauliString, c: complex, n: int) -> float:
    if abs(c.imag) > 1e-9:
        raise CompileError(f"non-Hermitian coefficient {c} on term {s.label(n)}")
    return c.real


def compile_step(h: PauliSum, dt: float) -> list[Gate]:
    gates, _ = compile_step_with_terms(h, dt)
    return gates


def compile_step_with_terms(h: PauliSum, dt: float) -> tuple[list[Gate], list[str]]:
    """First-order product formula for one step: one exponential per term.

    Supported strings: single X/Y/Z, ZZ pairs, and mixed ZY/YZ pairs (the
    latter lowered by an x-axis pi/2 basis change that maps Y onto Z around
    a native ZZ).  Anything else raises CompileError naming the string.
    Identity terms are a global phase and are skipped.
    """
    singles: dict[str, list[tuple[int, float]]] = {"X": [], "Z": [], "Y": []}
    zz: list[tuple[tuple[int, int], float]] = []
    mixed: list[tuple[tuple[int, int], tuple[str, str], float]] = []
    for s, c in h.terms.items():
        if s.weight == 0:
            continue
        coeff = _real_coeff(s, c, h.n)
        if s.weight == 1:
            (site, axis), = s.ops
            singles[axis].append((site, coeff))
        elif s.weight == 2:
            (i, ai), (j, aj) = s.ops
            axes = (ai, aj)
            if axes == ("Z", "Z"):
                zz.append(((i, j), coeff))
            elif axes in (("Z", "Y"), ("Y", "Z")):
                mixed.append(((i, j), axes, coeff))
            else:
                raise CompileError(f"unsupported 2-site term {s.label(h.n)}")
        else:
            raise CompileError(
                f"unsupported term {s.label(h.n)} of weight {s.weight}; "
                "the native set covers weight <= 2 over Z/X/Y/ZZ/ZY"
            )
    gates: list[Gate] = []
    terms: list[str] = []

    def emit(g: Gate, term: str) -> None:
        gates.append(g)
        terms.append(term)

    for axis, kind in (("X", "RX"), ("Z", "RZ")):
        for site, coeff in sorted(singles[axis]):
            emit(Gate(kind, (site,), 2.0 * coeff * dt), f"{axis}{site}")
    for (i, j), coeff in sorted(zz):
        emit(Gate("ZZ", (i, j), 2.0 * coeff * dt), f"Z{i}Z{j}")
    for site, coeff in sorted(singles["Y"]):
        emit(Gate("RY", (site,), 2.0 * coeff * dt), f"Y{site}")
    for (i, j), axes, coeff in sorted(mixed):
        label = f"{axes[0]}{i}{axes[1]}{j}"
        y_site = i if axes[0] == "Y" else j
        emit(Gate("RX", (y_site,), math.pi / 2.0), label)
        emit(Gate("ZZ", (i, j), 2.0 * coeff * dt), label)
        emit(Gate("RX", (y_site,), -math.pi / 2.0), label)
    return gates, terms


def compile_protocol(inst: IsingInstance, cfg: ProtocolConfig) -> CircuitIR:
    """Digitize and lower the whole protocol, then apply the configured pruning."""
    gates: list[Gate] = []
    meta: list[dict] = []
    for k, (_, h) in enumerate(digitize(inst, cfg)):
        step_gates, terms = compile_step_with_terms(h, cfg.dt)
        gates.extend(step_gates)
        meta.extend({"step": k, "term": t} for t in terms)
    circuit = CircuitIR(inst.n, tuple(gates), tuple(meta))
    if cfg.prune_threshold > 0.0:
        circuit = prune(circuit, cfg.prune_threshold)
    return circuit


def prune(c: CircuitIR, threshold: float) -> CircuitIR:
    """Drop gates with |theta| < threshold, preserving survivor order.

    Removed gates are recorded in ``removed`` with their original index and
    provenance.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    kept_gates: list[Gate] = []
    kept_meta: list[dict] = []
    removed = list(c.removed)
    for idx, (g, m) in enumerate(zip(c.gates, c.meta)):
        if abs(g.theta) < threshold:
            removed.append({"index": idx, "kind": g.kind, "sites": list(g.sites),
                            "theta": g.theta, **m})
        else:
            kept_gates.append(g)
            kept_meta.append(m)
    return CircuitIR(c.n, tuple(kept_gates), tuple(kept_meta), tuple(removed))


def truncate_2local(h: PauliSum, k: int) -> PauliSum:
    """Keep every term of weight <= 1 plus the k largest-|coefficient| 2-local terms.

    Ties break toward lexicographically smaller site pairs.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    kept = {s: c for s, c in h.terms.items() if s.weight <= 1}
    two_local = [(s, c) for s, c in h.terms.items() if s.weight == 2]
    two_local.sort(key=lambda sc: (-abs(sc[1]), tuple(site for site, _ in sc[0].ops)))
    for s, c in two_local[:k]:
        kept[s] = c
    higher = {s: c for s, c in h.terms.items() if s.weight > 2}
    kept.update(higher)
    return PauliSum(h.n, kept)


@dataclass(frozen=True)
class CircuitStats:
    counts: dict[str, int]
    total: int
    two_qubit: int
    depth: int

    def to_dict(self) -> dict:
        return {"counts": dict(self.counts), "total": self.total,
                "two_qubit": self.two_qubit, "depth": self.depth}


def stats(c: CircuitIR) -> CircuitStats:
    """Gate counts by kind, two-qubit count, and site-chain depth."""
    counts = {k: 0 for k in GATE_KINDS}
    frontier = [0] * c.n
    for g in c.gates:
        counts[g.kind] += 1
        level = max(frontier[s] for s in g.sites) + 1
        for s in g.sites:
            frontier[s] = level
    return CircuitStats(
        counts=counts,
        total=len(c.gates),
        two_qubit=counts["ZZ"],
        depth=max(frontier) if c.n else 0,
    )


def circuit_to_json_dict(c: CircuitIR) -> dict:
    return {
        "n": c.n,
        "conventions": dict(CONVENTIONS),
        "gates": [{"kind": g.kind, "sites": list(g.sites), "theta": g.theta}
                  for g in c.gates],
    }


def circuit_from_json_dict(payload: dict) -> CircuitIR:
    try:
        n = payload["n"]
        rows = payload["gates"]
    except (KeyError, TypeError) as exc:
        raise CompileError(f"circuit JSON missing field: {exc}") from exc
    gates = []
    for idx, row in enumerate(rows):
        try:
            gates.append(Gate(row["kind"], tuple(row["sites"]), float(row["theta"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise CompileError(f"bad gate entry at index {idx}: {exc}") from exc
    return CircuitIR(n, tuple(gates))


def with_threshold(cfg: ProtocolConfig, threshold: float) -> ProtocolConfig:
    return replace(cfg, prune_threshold=threshold)
