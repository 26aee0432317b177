"""Classical symbolic layer and prequantization on model phase spaces."""

from .evolution import FlowSpec, classify_flow, prequantum_evolve
from .gridops import (PhaseSpaceGrid, PrequantApplier, check_dirac,
                      interior_test_states, liouville_gram, prequantize,
                      selfadjoint_residual)
from .observables import (DEGREE_CAP, HamiltonianField, Observable,
                          ObservableKind, hamiltonian_vector_field,
                          lie_bracket, poisson_bracket)
from .sectors import (SectorSpec, WeilResult, cylinder_momentum_operator,
                      cylinder_spectrum, weil_admissible)

__all__ = [
    "DEGREE_CAP",
    "FlowSpec",
    "HamiltonianField",
    "Observable",
    "ObservableKind",
    "PhaseSpaceGrid",
    "PrequantApplier",
    "SectorSpec",
    "WeilResult",
    "check_dirac",
    "classify_flow",
    "cylinder_momentum_operator",
    "cylinder_spectrum",
    "hamiltonian_vector_field",
    "interior_test_states",
    "lie_bracket",
    "liouville_gram",
    "poisson_bracket",
    "prequantize",
    "prequantum_evolve",
    "selfadjoint_residual",
    "weil_admissible",
]
