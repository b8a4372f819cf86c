"""Process-wide knobs shared across modules."""

import os

DEFAULT_DENSE_LIMIT = 14
DENSE_LIMIT_ENV = "DCQF_DENSE_LIMIT"

# Canonical drop threshold for Pauli-sum coefficients.  Small relative to the
# coefficient magnitudes that appear in practice (~1e0 .. 1e3).
COEFF_TOL = 1e-12


def dense_limit() -> int:
    """Qubit cap for any operation that materializes 2^n-sized objects.

    Overridable through the DCQF_DENSE_LIMIT environment variable; read on
    every call so tests and long-lived services pick up changes.
    """
    raw = os.environ.get(DENSE_LIMIT_ENV)
    if raw is None:
        return DEFAULT_DENSE_LIMIT
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{DENSE_LIMIT_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{DENSE_LIMIT_ENV} must be positive, got {value}")
    return value


def check_dense_ok(n: int, what: str) -> None:
    limit = dense_limit()
    if n > limit:
        raise ValueError(
            f"{what} requires a dense 2^{n}-dimensional object; the configured "
            f"limit is {limit} qubits (set {DENSE_LIMIT_ENV} to raise it)"
        )
