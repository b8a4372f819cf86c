"""Counterdiabatic driving terms.

Two approximations of the adiabatic gauge potential are supported:

* ``local-y``: a single-site ansatz sum_i beta_i(lambda) Y_i with the
  closed-form coefficient
  beta_i = h_i / (2 [(lambda-1)^2 + lambda^2 (h_i^2 + sum_{j!=i} J_ij^2)]).
* ``nested-commutator``: A = sum_{k<=l} alpha_k O_k where O_k is i times the
  (2k-1)-fold nested commutator of the interpolating Hamiltonian with its
  lambda-derivative, and the alpha_k minimize the action Tr[G^2] with
  G = dH/dlambda + i[A, H].  The action is exactly quadratic in alpha, so
  the minimizer comes from one linear solve.

The driving term added to the evolution is lambda_dot(t) * A(lambda(t)).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .ising import IsingInstance, to_hamiltonian
from .pauli import PauliString, PauliSum, commutator, hs_inner
from .schedule import lambda_dot, lambda_value

MODES = ("adiabatic", "full-cd", "impulse")
VARIANT_KINDS = ("local-y", "nested-commutator")

DEFAULT_TERM_CAP = 10 ** 6


class TermExplosionError(ValueError):
    """Nested-commutator expansion exceeded the configured string cap."""


class DegenerateAgpWarning(UserWarning):
    """Action minimization was singular; coefficients defaulted to the minimum-norm solution."""


@dataclass(frozen=True)
class CDVariant:
    """Which gauge-potential approximation to drive with."""

    kind: str = "local-y"
    order: int = 1

    def __post_init__(self):
        if self.kind not in VARIANT_KINDS:
            raise ValueError(f"variant kind must be one of {VARIANT_KINDS}, got {self.kind!r}")
        if self.order < 1:
            raise ValueError(f"expansion order must be >= 1, got {self.order}")


@dataclass(frozen=True)
class CDCoefficients:
    """Coefficients of the gauge-potential ansatz at one schedule point."""

    lam: float
    alphas: tuple[float, ...] = ()
    betas: tuple[float, ...] = ()
    degenerate: bool = False


def initial_hamiltonian(n: int) -> PauliSum:
    """Mixer -sum_i X_i, whose ground state is |+>^n."""
    return PauliSum(n, {PauliString.single(i, "X"): -1.0 + 0j for i in range(n)})


def adiabatic_hamiltonian(inst: IsingInstance, lam: float) -> PauliSum:
    """(1 - lambda) * H_initial + lambda * H_problem."""
    return (1.0 - lam) * initial_hamiltonian(inst.n) + lam * to_hamiltonian(inst)


def driver_derivative(inst: IsingInstance) -> PauliSum:
    """d/dlambda of the interpolating Hamiltonian: H_problem - H_initial."""
    return to_hamiltonian(inst) - initial_hamiltonian(inst.n)


def coupling_power(inst: IsingInstance) -> np.ndarray:
    """Per-site sum of squared couplings, sum_{j != i} J_ij^2."""
    k = np.zeros(inst.n)
    for (i, j), v in inst.J.items():
        k[i] += v * v
        k[j] += v * v
    return k


def local_beta(inst: IsingInstance, lam: float) -> np.ndarray:
    """Closed-form single-Y coefficients; beta_i carries the sign of h_i for lam < 1."""
    if not (0.0 <= lam <= 1.0):
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    h = np.asarray(inst.h)
    denom = 2.0 * ((lam - 1.0) ** 2 + lam ** 2 * (h ** 2 + coupling_power(inst)))
    return h / denom


def local_generator(inst: IsingInstance, lam: float) -> PauliSum:
    betas = local_beta(inst, lam)
    return PauliSum(inst.n, {
        PauliString.single(i, "Y"): complex(b) for i, b in enumerate(betas)
    })


def _nested_chain(inst: IsingInstance, lam: float, depth: int, cap: int) -> list[PauliSum]:
    """[L_0 .. L_depth] with L_0 = dH/dlambda and L_m = [H_ad, L_{m-1}]."""
    h_ad = adiabatic_hamiltonian(inst, lam)
    chain = [driver_derivative(inst)]
    total = len(chain[0])
    for _ in range(depth):
        nxt = commutator(h_ad, chain[-1])
        total += len(nxt)
        if total > cap:
            raise TermExplosionError(
                f"nested-commutator expansion produced more than {cap} strings"
            )
        chain.append(nxt)
    return chain


def nc_basis(inst: IsingInstance, lam: float, l: int,
             cap: int = DEFAULT_TERM_CAP) -> list[PauliSum]:
    """Hermitian basis operators O_k = i * L_{2k-1}, k = 1..l.

    Every O_k has purely real coefficients and exclusively odd-Y-weight
    strings; for l = 1 the basis is independent of lambda.
    """
    if l < 1:
        raise ValueError(f"order must be >= 1, got {l}")
    chain = _nested_chain(inst, lam, 2 * l - 1, cap)
    return [1j * chain[2 * k - 1] for k in range(1, l + 1)]


def solve_alpha(inst: IsingInstance, lam: float, l: int,
                cap: int = DEFAULT_TERM_CAP) -> list[float]:
    """Action-minimizing expansion coefficients from the normal equations.

    G = L_0 + sum_k alpha_k L_{2k}, so minimizing <G, G> is the linear
    system  <L_2k, L_2k'> alpha_k' = -<L_2k, L_0>.  A singular system (for
    example an instance whose pieces all commute) yields the minimum-norm
    solution -- all zeros in the fully degenerate case -- plus a
    DegenerateAgpWarning.
    """
    if l < 1:
        raise ValueError(f"order must be >= 1, got {l}")
    chain = _nested_chain(inst, lam, 2 * l, cap)
    even = [chain[2 * k] for k in range(1, l + 1)]
    gram = np.empty((l, l))
    rhs = np.empty(l)
    for a in range(l):
        rhs[a] = -hs_inner(even[a], chain[0]).real
        for b in range(a, l):
            gram[a, b] = gram[b, a] = hs_inner(even[a], even[b]).real
    alphas, _, rank, _ = np.linalg.lstsq(gram, rhs, rcond=None)
    if rank < l:
        warnings.warn(
            f"singular action minimization (rank {rank} < {l}); "
            "returning the minimum-norm coefficients",
            DegenerateAgpWarning,
            stacklevel=2,
        )
    return [float(a) for a in alphas]


def nc_generator(inst: IsingInstance, lam: float, l: int,
                 cap: int = DEFAULT_TERM_CAP) -> PauliSum:
    basis = nc_basis(inst, lam, l, cap)
    alphas = solve_alpha(inst, lam, l, cap)
    acc = PauliSum.zero(inst.n)
    for a, op in zip(alphas, basis):
        acc = acc + a * op
    return acc


def cd_generator(inst: IsingInstance, lam: float, variant: CDVariant) -> PauliSum:
    """Gauge-potential approximation A(lambda), before the lambda_dot factor."""
    if variant.kind == "local-y":
        return local_generator(inst, lam)
    return nc_generator(inst, lam, variant.order)


def cd_pauli_sum(inst: IsingInstance, t: float, T: float, variant: CDVariant) -> PauliSum:
    """Driving term lambda_dot(t) * A(lambda(t)); empty at t = 0 and t = T."""
    ld = lambda_dot(t, T)
    return ld * cd_generator(inst, lambda_value(t, T), variant)


def total_hamiltonian(inst: IsingInstance, t: float, T: float,
                      mode: str, variant: CDVariant) -> PauliSum:
    """Full time-dependent generator in the requested evolution mode.

    adiabatic: interpolation only; full-cd: interpolation plus driving term;
    impulse: driving term only (fast-sweep limit).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "impulse":
        return cd_pauli_sum(inst, t, T, variant)
    h = adiabatic_hamiltonian(inst, lambda_value(t, T))
    if mode == "full-cd":
        h = h + cd_pauli_sum(inst, t, T, variant)
    return h


def nc1_compact_form(inst: IsingInstance, lam: float) -> PauliSum:
    """Single-ordering compact variant of the first-order generator.

    -4 alpha_1 [sum_i h_i Y_i + sum_{i<j} J_ij Z_i Y_j].  This form is often
    quoted as shorthand for the first-order drive but is NOT
    operator-identical to the symbolically derived generator, which carries
    both Y_i Z_j and Z_i Y_j orderings with half the prefactor; see
    nc1_ordering_gap.  The evolution pipeline always uses the derived form.
    """
    alpha1 = solve_alpha(inst, lam, 1)[0]
    terms: dict[PauliString, complex] = {}
    for i, hi in enumerate(inst.h):
        if hi != 0.0:
            terms[PauliString.single(i, "Y")] = -4.0 * alpha1 * hi
    for (i, j), v in inst.J.items():
        if v != 0.0:
            terms[PauliString.from_map({i: "Z", j: "Y"})] = -4.0 * alpha1 * v
    return PauliSum(inst.n, terms)


def nc1_ordering_gap(inst: IsingInstance, lam: float) -> PauliSum:
    """Derived first-order generator minus the compact single-ordering form."""
    return nc_generator(inst, lam, 1) - nc1_compact_form(inst, lam)
