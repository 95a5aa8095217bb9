"""Ground states of the coupled Choquard system

    -Lap u + A u = (2p/(p+q)) (I_alpha * |v|^q) |u|^(p-2) u
    -Lap v + B v = (2q/(p+q)) (I_alpha * |u|^p) |v|^(q-2) v

on a periodic box, by Nehari-projected gradient descent.
"""
from .energy import EnergyReport, Evaluation, Pair, ProblemSpec, action, check_admissible, coupling, make_problem
from .errors import (
    ChoquardError,
    ConfigError,
    DegeneratePair,
    DomainError,
    GridMismatch,
    NoConvergence,
    NonPositivePotential,
    PeriodMismatch,
)
from .grid import Field, GridSpec
from .potentials import BoundedLimit, Constant, Periodic, sample_potential
from .riesz import BALL, DROP, TRUNCATED, build_operator
from .solver import SolverConfig, SolveResult, ground_state, nehari_project

__version__ = "0.1.0"
