"""Exact symbolic algebra over weighted Pauli strings.

Conventions fixed here and inherited by every other module:

* A string stores only its non-identity sites; equality compares those
  sparse site maps.
* Tensor order: site 0 is the most significant Kronecker factor, so the
  basis index of bitstring ``b`` is ``int(b, 2)`` with the leftmost
  character belonging to site 0.
* Coefficients below ``config.COEFF_TOL`` are dropped during
  normalization, keeping sums canonical.

All values are immutable after construction and every operation is a pure
function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .config import COEFF_TOL, check_dense_ok

AXES = ("X", "Y", "Z")

_I2 = np.eye(2, dtype=complex)
_MATS = {
    "I": _I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Single-site products a*b = i^k * c, encoded as (k mod 4, c).
_MUL1 = {
    ("X", "X"): (0, "I"), ("Y", "Y"): (0, "I"), ("Z", "Z"): (0, "I"),
    ("X", "Y"): (1, "Z"), ("Y", "X"): (3, "Z"),
    ("Y", "Z"): (1, "X"), ("Z", "Y"): (3, "X"),
    ("Z", "X"): (1, "Y"), ("X", "Z"): (3, "Y"),
}
_PHASES = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-site Pauli operators, identity sites omitted.

    ``ops`` is a tuple of (site, axis) pairs sorted by site, axis in
    {X, Y, Z}.  The empty tuple is the identity.
    """

    ops: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        sites = [s for s, _ in self.ops]
        if sites != sorted(set(sites)):
            raise ValueError(f"sites must be unique and sorted, got {sites}")
        for site, axis in self.ops:
            if site < 0:
                raise ValueError(f"negative site index {site}")
            if axis not in AXES:
                raise ValueError(f"axis must be one of {AXES}, got {axis!r}")

    @classmethod
    def identity(cls) -> "PauliString":
        return cls(())

    @classmethod
    def single(cls, site: int, axis: str) -> "PauliString":
        return cls(((site, axis),))

    @classmethod
    def from_map(cls, axes: Mapping[int, str]) -> "PauliString":
        return cls(tuple(sorted((s, a) for s, a in axes.items() if a != "I")))

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Dense label, leftmost character = site 0, e.g. ``"XIZ"``."""
        return cls.from_map({i: a for i, a in enumerate(label)})

    def axis_map(self) -> dict[int, str]:
        return dict(self.ops)

    def label(self, n: int) -> str:
        axes = self.axis_map()
        if axes and max(axes) >= n:
            raise ValueError(f"string touches site {max(axes)} but n={n}")
        return "".join(axes.get(i, "I") for i in range(n))

    @property
    def weight(self) -> int:
        return len(self.ops)

    @property
    def y_weight(self) -> int:
        return sum(1 for _, a in self.ops if a == "Y")

    def max_site(self) -> int:
        """Largest touched site, -1 for the identity."""
        return self.ops[-1][0] if self.ops else -1

    def __repr__(self):
        if not self.ops:
            return "PauliString(I)"
        body = " ".join(f"{a}{s}" for s, a in self.ops)
        return f"PauliString({body})"


def mul(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Product of two strings: returns (phase, string) with mat(a)@mat(b) = phase*mat(c).

    The phase is always a fourth root of unity, returned exactly.
    """
    amap = a.axis_map()
    out: dict[int, str] = dict(amap)
    k = 0
    for site, axis in b.ops:
        cur = out.get(site)
        if cur is None:
            out[site] = axis
        else:
            dk, c = _MUL1[(cur, axis)]
            k = (k + dk) % 4
            if c == "I":
                del out[site]
            else:
                out[site] = c
    return _PHASES[k], PauliString.from_map(out)


def _string_matrix(s: PauliString, n: int) -> np.ndarray:
    axes = s.axis_map()
    m = np.array([[1.0 + 0j]])
    for site in range(n):
        m = np.kron(m, _MATS[axes.get(site, "I")])
    return m


@dataclass(frozen=True)
class PauliSum:
    """Complex-weighted sum of Pauli strings on ``n`` sites.

    Construction normalizes: zero-ish coefficients are dropped and string
    site indices are checked against ``n``.  Treat instances as immutable.
    """

    n: int
    terms: dict[PauliString, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"site count must be positive, got {self.n}")
        clean: dict[PauliString, complex] = {}
        for s, c in self.terms.items():
            if s.max_site() >= self.n:
                raise ValueError(f"{s!r} touches site {s.max_site()} but n={self.n}")
            c = complex(c)
            if abs(c) > COEFF_TOL:
                clean[s] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, n: int) -> "PauliSum":
        return cls(n, {})

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[PauliString, complex]]) -> "PauliSum":
        acc: dict[PauliString, complex] = {}
        for s, c in terms:
            acc[s] = acc.get(s, 0j) + complex(c)
        return cls(n, acc)

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check_n(other)
        acc = dict(self.terms)
        for s, c in other.terms.items():
            acc[s] = acc.get(s, 0j) + c
        return PauliSum(self.n, acc)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (other * -1.0)

    def __mul__(self, scalar: complex) -> "PauliSum":
        scalar = complex(scalar)
        return PauliSum(self.n, {s: c * scalar for s, c in self.terms.items()})

    __rmul__ = __mul__

    def _check_n(self, other: "PauliSum") -> None:
        if self.n != other.n:
            raise ValueError(f"site counts differ: {self.n} vs {other.n}")

    def coeff(self, s: PauliString) -> complex:
        return self.terms.get(s, 0j)

    def product(self, other: "PauliSum") -> "PauliSum":
        """Operator product, distributing term by term."""
        self._check_n(other)
        acc: dict[PauliString, complex] = {}
        for sa, ca in self.terms.items():
            for sb, cb in other.terms.items():
                ph, sc = mul(sa, sb)
                acc[sc] = acc.get(sc, 0j) + ca * cb * ph
        return PauliSum(self.n, acc)

    def is_hermitian(self, tol: float = COEFF_TOL) -> bool:
        return all(abs(c.imag) <= tol for c in self.terms.values())

    def max_y_weight_parity_odd(self) -> bool:
        """True when every term has odd Y-weight (vacuously true when empty)."""
        return all(s.y_weight % 2 == 1 for s in self.terms)

    def __repr__(self):
        if not self.terms:
            return f"PauliSum(n={self.n}, 0)"
        parts = ", ".join(f"{s.label(self.n)}: {c:.6g}" for s, c in sorted(
            self.terms.items(), key=lambda kv: kv[0].label(self.n)))
        return f"PauliSum(n={self.n}, {{{parts}}})"


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """AB - BA as a canonical PauliSum.

    Pairs of strings that commute sitewise are skipped; anticommuting pairs
    contribute 2*phase*product.
    """
    a._check_n(b)
    acc: dict[PauliString, complex] = {}
    for sa, ca in a.terms.items():
        amap = sa.axis_map()
        for sb, cb in b.terms.items():
            clashes = sum(
                1 for site, axis in sb.ops
                if site in amap and amap[site] != axis
            )
            if clashes % 2 == 0:
                continue
            ph, sc = mul(sa, sb)
            acc[sc] = acc.get(sc, 0j) + 2.0 * ca * cb * ph
    return PauliSum(a.n, acc)


def hs_inner(a: PauliSum, b: PauliSum) -> complex:
    """Normalized Hilbert-Schmidt inner product Tr[A^dag B] / 2^n.

    Pauli strings are orthonormal under this trace, so only matching strings
    contribute; no dense matrix is ever built.
    """
    a._check_n(b)
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    total = 0j
    for s, c in small.terms.items():
        other = big.terms.get(s)
        if other is not None:
            if small is a:
                total += c.conjugate() * other
            else:
                total += other.conjugate() * c
    return total


def to_dense(a: PauliSum) -> np.ndarray:
    """Dense 2^n x 2^n matrix, site 0 as the most significant factor."""
    check_dense_ok(a.n, "to_dense")
    dim = 1 << a.n
    m = np.zeros((dim, dim), dtype=complex)
    for s, c in a.terms.items():
        m += c * _string_matrix(s, a.n)
    return m
