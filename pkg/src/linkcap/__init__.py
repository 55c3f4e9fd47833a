"""Capacity limits of multi-span optical links with quantum-limited
phase-insensitive amplification, and optimal amplifier placement under a
total-optical-power cap."""

from linkcap.capacity import (
    InputPower,
    NoisyChannel,
    asymptotic_gap,
    g_function,
    holevo_se,
    shannon_se,
)
from linkcap.chain import (
    AmplifierStage,
    ConstraintViolationError,
    LinkConfig,
    attenuation_db,
    check_power_constraint,
    end_to_end,
    propagate_stage,
    saturated_link,
    saturating_gain,
)
from linkcap.distributed import (
    DistributedState,
    constant_power_gamma,
    constant_power_solution,
    ode_propagate,
    optimal_termination,
)
from linkcap.kernels import backend_name
from linkcap.optimizer import (
    OptimizationProblem,
    OptimizationResult,
    OptimizerSettings,
    brute_force_grid,
    distributed_threshold,
    loss_only_se,
    loss_only_threshold,
    optimize,
    verify_max_gain_rule,
)

__version__ = "0.1.0"

__all__ = [
    "AmplifierStage",
    "ConstraintViolationError",
    "DistributedState",
    "InputPower",
    "LinkConfig",
    "NoisyChannel",
    "OptimizationProblem",
    "OptimizationResult",
    "OptimizerSettings",
    "asymptotic_gap",
    "attenuation_db",
    "backend_name",
    "brute_force_grid",
    "check_power_constraint",
    "constant_power_gamma",
    "constant_power_solution",
    "distributed_threshold",
    "end_to_end",
    "g_function",
    "holevo_se",
    "loss_only_se",
    "loss_only_threshold",
    "ode_propagate",
    "optimal_termination",
    "optimize",
    "propagate_stage",
    "saturated_link",
    "saturating_gain",
    "shannon_se",
    "verify_max_gain_rule",
]
