"""Ground states of Ising spin glasses via digitized counterdiabatic evolution.

The package provides exact Pauli-string algebra, annealing schedules,
counterdiabatic driving terms (a local single-Y ansatz and a variational
nested-commutator expansion), a first-order Trotter compiler targeting the
native gate set {RX, RY, RZ, ZZ}, a dense statevector simulator with an
exact step-propagator oracle, instantaneous-spectrum analysis, and a QAOA
baseline.  An HTTP service (``dcqf.service``) and a thin CLI client
(``dcqf.cli``) tie the pieces into reproducible runs.
"""

__version__ = "0.1.0"
