"""Gradient flows on unitary groups and their subgroups."""
from .errors import ContractError, DimensionError, IntegrityError
from .flows import (AnalyticLocal, ArmijoHalving, Fixed, FlowResult, FlowTrace, PenaltySchedule,
                    QualityFunction, RestartResult, analytic_step_u1k, classify_critical,
                    constraint_residual, gradient_direction, hessian_local, run_flow,
                    run_restarts, value)
from .liealg import (SubalgebraBasis, full_subalgebra_basis, lie_closure, local_subalgebra_basis,
                     partition_subalgebra_basis, stabilizer_subalgebra)
from .orbits import OrbitPoint, db_step, db_step_restricted, run_double_bracket

__version__ = "0.1.0"

__all__ = [
    "AnalyticLocal", "ArmijoHalving", "ContractError", "DimensionError", "Fixed", "FlowResult",
    "FlowTrace", "IntegrityError", "OrbitPoint", "PenaltySchedule", "QualityFunction",
    "RestartResult", "SubalgebraBasis", "analytic_step_u1k", "classify_critical",
    "constraint_residual", "db_step", "db_step_restricted", "full_subalgebra_basis",
    "gradient_direction", "hessian_local", "lie_closure", "local_subalgebra_basis",
    "partition_subalgebra_basis", "run_double_bracket", "run_flow", "run_restarts",
    "stabilizer_subalgebra", "value",
]
