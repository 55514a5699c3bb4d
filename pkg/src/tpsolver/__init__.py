"""Parametric tree solver for the integer transportation problem."""

__version__ = "0.1.0"

from .bounds import z_inf, z_prime_sup, z_sup
from .instance import (
    GeneratorConfig,
    Instance,
    InstanceFormatError,
    gen_assignment,
    gen_random,
    gen_worst_case,
    parse_instance,
    read_instance,
    serialize_instance,
    validate,
    write_instance,
)
from .oracle import brute_force_solve, oracle_solve
from .solver import Descent, Mode, SolveOptions, SolveReport, SolverError, solve, verify_optimality

__all__ = [
    "Descent", "GeneratorConfig", "Instance", "InstanceFormatError", "Mode", "SolveOptions",
    "SolveReport", "SolverError", "brute_force_solve", "gen_assignment", "gen_random",
    "gen_worst_case", "oracle_solve", "parse_instance", "read_instance", "serialize_instance",
    "solve", "validate", "verify_optimality", "write_instance", "z_inf", "z_prime_sup", "z_sup",
]
