from .reversibility import (JointResult, PointwiseResult, joint_objective,
                            joint_reversibility, pointwise_reversibility)
from .states import (Coupling, HamiltonianSpec, LocalField, build_hamiltonian, build_state,
                     chain, family_state, ising_control_generators, pauli_string, ring)
from .tensors import (BipartiteResult, Rank1Result, Tensor, best_rank1, bipartite_flow,
                      bipartite_optimal, entanglement_point, entanglement_sweep, local_transfer,
                      outer, product_factors, rank1_from_factors, tensor_inner, tensor_unvec,
                      tensor_vec)

__all__ = [
    "BipartiteResult", "Coupling", "HamiltonianSpec", "JointResult", "LocalField",
    "PointwiseResult", "Rank1Result", "Tensor", "best_rank1", "bipartite_flow",
    "bipartite_optimal", "build_hamiltonian", "build_state", "chain", "entanglement_point",
    "entanglement_sweep", "family_state", "ising_control_generators", "joint_objective",
    "joint_reversibility", "local_transfer", "outer", "pauli_string", "pointwise_reversibility",
    "product_factors", "rank1_from_factors", "ring", "tensor_inner", "tensor_unvec", "tensor_vec",
]
