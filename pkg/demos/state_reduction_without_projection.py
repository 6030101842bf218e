"""Derive state reduction from the nonselective change alone.

A qubit in |+> is measured in the z basis by a pointer-basis apparatus.
We build the interaction unitary, extract the operation (the nonselective
state change), recover the per-outcome maps from it, and show the
conditional state for outcome +1 is |0><0| -- no projection postulate
applied to the probe anywhere.
"""

import numpy as np

from reduction_lab import (
    instrument_from_operation,
    instrument_of,
    nonselective,
    operation_of,
    outcome_probability,
    reduce,
    von_neumann_model,
)
from reduction_lab.quantum import PAULI_Z, DensityOperator, observable_from_hermitian

obs = observable_from_hermitian(PAULI_Z)
model = von_neumann_model(obs, dim_a=2)
plus = DensityOperator(np.full((2, 2), 0.5, dtype=complex))

print("interaction unitary:")
print(np.round(model.unitary.real, 6))

operation = operation_of(model)
print("\nnonselective change of |+><+| (coherence destroyed):")
print(np.round(nonselective(instrument_of(model), plus).matrix, 6))

# The per-outcome maps are determined by the operation alone.
ins = instrument_from_operation(operation, obs)
for a in sorted(obs.eigenvalues, reverse=True):
    p = outcome_probability(ins, a, plus)
    rho_a = reduce(ins, a, plus)
    print(f"\noutcome {a:+.0f}: probability {p:.3f}, conditional state:")
    print(np.round(rho_a.matrix, 6))
