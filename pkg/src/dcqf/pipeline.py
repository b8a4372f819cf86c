"""End-to-end runs: resolve inputs, evolve, sample, and build export payloads.

Every payload embeds a manifest (command echo, fully resolved config, seed,
package version, input digest).  Payloads contain no timestamps or other
run-local noise, so two runs with identical manifests serialize to
byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import secrets

from . import __version__
from .agp import CDVariant
from .compiler import (CircuitIR, ProtocolConfig, circuit_from_json_dict,
                       circuit_to_json_dict, compile_protocol, stats)
from .ising import (IsingInstance, brute_force_ground, builtin, parse_instance,
                    serialize_instance)
from .qaoa import QaoaParams, optimize_angles, qaoa_circuit
from .simulator import (RNG_NAME, distribution, initial_plus_state, run_circuit,
                        sample, success_probability)
from .spectrum import instantaneous_spectrum, report_to_csv

VARIANT_ALIASES = {"local": "local-y", "nc": "nested-commutator"}


def resolve_instance(builtin_name: str | None,
                     instance_text: str | None) -> tuple[IsingInstance, str, str]:
    """Returns (instance, label, sha256 digest of the canonical serialization)."""
    if (builtin_name is None) == (instance_text is None):
        raise ValueError("provide exactly one of a builtin name or an instance file")
    if builtin_name is not None:
        inst = builtin(builtin_name)
        label = f"builtin:{builtin_name}"
    else:
        inst = parse_instance(instance_text)
        label = "file"
    digest = hashlib.sha256(serialize_instance(inst).encode()).hexdigest()
    return inst, label, digest


def make_config(mode: str = "full-cd", variant: str = "local", l: int = 1,
                T: float = 0.4, dt: float = 0.1, sampling: str = "integral",
                prune: float = 0.0, truncate: int | None = None) -> ProtocolConfig:
    kind = VARIANT_ALIASES.get(variant, variant)
    return ProtocolConfig(
        mode=mode, variant=CDVariant(kind=kind, order=l), T=T, dt=dt,
        sampling=sampling, prune_threshold=prune, truncate_2local=truncate,
    )


def config_dict(cfg: ProtocolConfig, instance_label: str, shots: int | None = None,
                **extra) -> dict:
    out = {
        "instance": instance_label,
        "mode": cfg.mode,
        "variant": {"kind": cfg.variant.kind, "order": cfg.variant.order},
        "T": cfg.T,
        "dt": cfg.dt,
        "steps": cfg.steps,
        "sampling": cfg.sampling,
        "prune_threshold": cfg.prune_threshold,
        "truncate_2local": cfg.truncate_2local,
        "rng": RNG_NAME,
    }
    if shots is not None:
        out["shots"] = shots
    out.update(extra)
    return out


def resolve_seed(seed: int | None) -> int:
    """Explicit seed, or a freshly drawn one that gets recorded in the manifest."""
    if seed is not None:
        return int(seed)
    return secrets.randbelow(2 ** 31)


def manifest(command: str | None, config: dict, seed: int, digest: str) -> dict:
    return {
        "command": command or "api",
        "config": config,
        "seed": seed,
        "version": __version__,
        "input_digest": digest,
    }


def ideal_run(inst: IsingInstance, cfg: ProtocolConfig) -> tuple[CircuitIR, dict[str, float]]:
    circuit = compile_protocol(inst, cfg)
    state = run_circuit(circuit, initial_plus_state(inst.n))
    return circuit, distribution(state)


def run_solve(inst: IsingInstance, cfg: ProtocolConfig, shots: int,
              seed: int | None, command: str | None, instance_label: str,
              digest: str) -> dict:
    """Compile, simulate, sample; success is scored on the exhaustive ground bitstring."""
    seed = resolve_seed(seed)
    ground_bits, ground_energy = brute_force_ground(inst)
    target = ground_bits[0]
    _, dist = ideal_run(inst, cfg)
    counts = sample(dist, shots, seed) if shots > 0 else None
    cfg_d = config_dict(cfg, instance_label, shots=shots)
    return {
        "config": cfg_d,
        "seed": seed,
        "distribution": dist,
        "counts": counts,
        "success": {"target": target, "p": success_probability(dist, target)},
        "ground": {"bitstrings": ground_bits, "energy": ground_energy},
        "manifest": manifest(command, cfg_d, seed, digest),
    }


def run_compare(inst: IsingInstance, cfg: ProtocolConfig, shots: int,
                seed: int | None, qaoa_p: int, qaoa_budget: int,
                command: str | None, instance_label: str, digest: str) -> dict:
    """Counterdiabatic run and optimized QAOA side by side on the same instance.

    Shot sampling uses ``seed`` for the CD run and ``seed + 1`` for QAOA so
    the two draws are independent but jointly reproducible.
    """
    if qaoa_p < 1:
        raise ValueError(f"qaoa_p must be >= 1, got {qaoa_p}")
    if qaoa_budget < 1:
        raise ValueError(f"qaoa_budget must be >= 1, got {qaoa_budget}")
    seed = resolve_seed(seed)
    ground_bits, _ = brute_force_ground(inst)
    target = ground_bits[0]

    circuit, dist = ideal_run(inst, cfg)
    dcqf_side = {
        "distribution": dist,
        "counts": sample(dist, shots, seed) if shots > 0 else None,
        "success": {"target": target, "p": success_probability(dist, target)},
        "stats": stats(circuit).to_dict(),
    }

    params, best = optimize_angles(inst, qaoa_p, qaoa_budget, seed)
    qcirc = qaoa_circuit(inst, params)
    qdist = distribution(run_circuit(qcirc, initial_plus_state(inst.n)))
    qaoa_side = {
        "distribution": qdist,
        "counts": sample(qdist, shots, seed + 1) if shots > 0 else None,
        "success": {"target": target, "p": best},
        "stats": stats(qcirc).to_dict(),
        "angles": {"gammas": list(params.gammas), "betas": list(params.betas)},
        "p": qaoa_p,
        "budget": qaoa_budget,
    }
    cfg_d = config_dict(cfg, instance_label, shots=shots,
                        qaoa_p=qaoa_p, qaoa_budget=qaoa_budget)
    return {
        "config": cfg_d,
        "seed": seed,
        "dcqf": dcqf_side,
        "qaoa": qaoa_side,
        "manifest": manifest(command, cfg_d, seed, digest),
    }


def run_spectrum(inst: IsingInstance, cfg: ProtocolConfig, grid: int, levels: int,
                 seed: int | None, command: str | None, instance_label: str,
                 digest: str) -> dict:
    seed = resolve_seed(seed)
    report = instantaneous_spectrum(inst, cfg, grid, levels)
    cfg_d = config_dict(cfg, instance_label, grid=grid, levels=levels)
    return {
        "csv": report_to_csv(report),
        "min_gap": report.min_gap,
        "min_gap_t": report.min_gap_t,
        "min_gap_lambda": report.min_gap_lambda,
        "ground_degeneracy": report.ground_degeneracy,
        "manifest": manifest(command, cfg_d, seed, digest),
    }


def run_compile(inst: IsingInstance, cfg: ProtocolConfig, seed: int | None,
                command: str | None, instance_label: str, digest: str) -> dict:
    seed = resolve_seed(seed)
    circuit = compile_protocol(inst, cfg)
    payload = circuit_to_json_dict(circuit)
    payload["stats"] = stats(circuit).to_dict()
    cfg_d = config_dict(cfg, instance_label)
    payload["manifest"] = manifest(command, cfg_d, seed, digest)
    return payload


def verify_circuit_payload(payload: dict) -> dict:
    """Re-ingest an exported circuit and recompute its stats."""
    circuit = circuit_from_json_dict(payload)
    return {"n": circuit.n, "stats": stats(circuit).to_dict()}


def dumps_canonical(payload: dict) -> str:
    """Deterministic serialization used for every file the package writes."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
