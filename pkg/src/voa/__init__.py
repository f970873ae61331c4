"""Volume-of-assistance entanglement measures for three- and four-qubit states."""

from .qstate import DensityMatrix, Ket, named_state, parse_state, parse_state_spec
from .tripartite import coa, ggm, mpc, three_tangle_pure, voa3
from .quadripartite import OptimizerConfig, coa4, optimize_decomposition, voa4

__all__ = [
    "DensityMatrix", "Ket", "named_state", "parse_state", "parse_state_spec",
    "coa", "ggm", "mpc", "three_tangle_pure", "voa3",
    "OptimizerConfig", "coa4", "optimize_decomposition", "voa4",
]
