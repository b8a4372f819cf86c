"""Ising spin-glass instances: ingestion, validation, energies, exhaustive oracle.

Energy model: ``offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j`` with spins
``s in {+1, -1}``.  Bit convention for all I/O: character ``i`` of a
bitstring is site ``i``; bit 0 maps to eigenvalue +1 and bit 1 to -1, so the
basis index of a bitstring equals ``int(bits, 2)`` in the package tensor
order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliString, PauliSum

BRUTE_FORCE_LIMIT = 24
_ENUM_CHUNK = 1 << 20


class InstanceError(ValueError):
    """Malformed instance data; message carries the offending field."""


@dataclass(frozen=True)
class IsingInstance:
    """Problem data: qubit count, local fields, couplings over ordered pairs, constant offset."""

    n: int
    h: tuple[float, ...]
    J: dict[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise InstanceError(f"n must be positive, got {self.n}")
        if len(self.h) != self.n:
            raise InstanceError(f"h has {len(self.h)} entries, expected n={self.n}")
        for i, v in enumerate(self.h):
            if not math.isfinite(v):
                raise InstanceError(f"h[{i}] is not finite: {v}")
        if not math.isfinite(self.offset):
            raise InstanceError(f"offset is not finite: {self.offset}")
        for (i, j), v in self.J.items():
            if not (0 <= i < j < self.n):
                raise InstanceError(f"coupling pair ({i},{j}) violates 0 <= i < j < n={self.n}")
            if not math.isfinite(v):
                raise InstanceError(f"J[({i},{j})] is not finite: {v}")

    def coupling_rows(self) -> list[tuple[int, int, float]]:
        return [(i, j, v) for (i, j), v in sorted(self.J.items())]


def _as_finite(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InstanceError(f"{where}: expected a number, got {x!r}")
    v = float(x)
    if not math.isfinite(v):
        raise InstanceError(f"{where}: non-finite number {x!r}")
    return v


def parse_instance(text: str) -> IsingInstance:
    """Parse the JSON instance format {"n", "h", "J": [[i, j, value], ...], "offset"}.

    Pairs given as (j, i) with j > i are folded to (i, j) with the same
    value; duplicates after folding and self-couplings are rejected.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise InstanceError("instance must be a JSON object")
    for key in ("n", "h", "J"):
        if key not in raw:
            raise InstanceError(f"missing field {key!r}")
    n = raw["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InstanceError(f"n: expected a positive integer, got {n!r}")
    h_raw = raw["h"]
    if not isinstance(h_raw, list) or len(h_raw) != n:
        raise InstanceError(f"h: expected a list of n={n} numbers")
    h = tuple(_as_finite(v, f"h[{i}]") for i, v in enumerate(h_raw))
    j_raw = raw["J"]
    if not isinstance(j_raw, list):
        raise InstanceError("J: expected a list of [i, j, value] triples")
    J: dict[tuple[int, int], float] = {}
    for k, row in enumerate(j_raw):
        where = f"J[{k}]"
        if not isinstance(row, list) or len(row) != 3:
            raise InstanceError(f"{where}: expected an [i, j, value] triple, got {row!r}")
        i, j = row[0], row[1]
        if isinstance(i, bool) or isinstance(j, bool) or not isinstance(i, int) or not isinstance(j, int):
            raise InstanceError(f"{where}: site indices must be integers, got {row!r}")
        if i == j:
            raise InstanceError(f"{where}: self-coupling on site {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise InstanceError(f"{where}: site index out of range for n={n}: ({i},{j})")
        pair = (i, j) if i < j else (j, i)
        if pair in J:
            raise InstanceError(f"{where}: duplicate pair {pair}")
        J[pair] = _as_finite(row[2], f"{where} value")
    offset = _as_finite(raw.get("offset", 0.0), "offset")
    return IsingInstance(n=n, h=h, J=J, offset=offset)


def serialize_instance(inst: IsingInstance) -> str:
    """Canonical JSON text; parse(serialize(inst)) round-trips exactly."""
    payload = {
        "n": inst.n,
        "h": list(inst.h),
        "J": [[i, j, v] for i, j, v in inst.coupling_rows()],
        "offset": inst.offset,
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _yan26() -> IsingInstance:
    # 5-qubit factoring-derived instance; sites are the 1-based labels of the
    # source minus one.
    return IsingInstance(
        n=5,
        h=(-142.0, -64.0, -81.0, -213.0, -4.5),
        J={
            (0, 1): -13.5, (0, 2): 3.5, (0, 3): 18.0, (0, 4): 17.5,
            (1, 2): -29.0, (1, 3): 19.5, (1, 4): -34.0,
            (2, 3): -31.5, (2, 4): -2.5,
            (3, 4): 4.5,
        },
        offset=781.0,
    )


_BUILTINS = {"yan26": _yan26}


def builtin(name: str) -> IsingInstance:
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise InstanceError(
            f"unknown builtin instance {name!r}; available: {sorted(_BUILTINS)}"
        ) from None
    return factory()


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)


def to_hamiltonian(inst: IsingInstance) -> PauliSum:
    """Diagonal Hamiltonian over {I, Z} strings, offset included as identity term."""
    terms: dict[PauliString, complex] = {}
    if inst.offset != 0.0:
        terms[PauliString.identity()] = complex(inst.offset)
    for i, hi in enumerate(inst.h):
        if hi != 0.0:
            terms[PauliString.single(i, "Z")] = complex(hi)
    for (i, j), v in inst.J.items():
        if v != 0.0:
            terms[PauliString.from_map({i: "Z", j: "Z"})] = complex(v)
    return PauliSum(inst.n, terms)


def _check_bits(inst: IsingInstance, bits: str) -> None:
    if len(bits) != inst.n:
        raise ValueError(f"bitstring length {len(bits)} != n={inst.n}")
    if any(b not in "01" for b in bits):
        raise ValueError(f"bitstring must contain only 0/1, got {bits!r}")


def energy(inst: IsingInstance, bits: str) -> float:
    """Classical energy of a spin configuration (bit 0 -> s=+1, bit 1 -> s=-1)."""
    _check_bits(inst, bits)
    s = [1.0 if b == "0" else -1.0 for b in bits]
    e = inst.offset
    for i, hi in enumerate(inst.h):
        e += hi * s[i]
    for (i, j), v in inst.J.items():
        e += v * s[i] * s[j]
    return e


def all_energies(inst: IsingInstance) -> np.ndarray:
    """Energies of every bitstring in tensor order, vectorized over 2^n."""
    if inst.n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"n={inst.n} exceeds the enumeration limit {BRUTE_FORCE_LIMIT}")
    size = 1 << inst.n
    out = np.empty(size, dtype=float)
    for start in range(0, size, _ENUM_CHUNK):
        idx = np.arange(start, min(start + _ENUM_CHUNK, size), dtype=np.int64)
        spins = [1.0 - 2.0 * ((idx >> (inst.n - 1 - i)) & 1) for i in range(inst.n)]
        e = np.full(idx.shape, inst.offset)
        for i, hi in enumerate(inst.h):
            e += hi * spins[i]
        for (i, j), v in inst.J.items():
            e += v * spins[i] * spins[j]
        out[start:start + idx.size] = e
    return out


def index_to_bits(index: int, n: int) -> str:
    return format(index, f"0{n}b")


def brute_force_ground(inst: IsingInstance) -> tuple[list[str], float]:
    """All minimizers of the energy over 2^n bitstrings, plus the minimum.

    Ties are exact float ties; every bitstring's energy is computed with the
    same operation order, so symmetric instances keep their degeneracy.
    """
    energies = all_energies(inst)
    emin = float(energies.min())
    winners = np.flatnonzero(energies == emin)
    return [index_to_bits(int(i), inst.n) for i in winners], emin
