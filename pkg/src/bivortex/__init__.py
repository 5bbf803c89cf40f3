"""Coupled two-species vortex-antivortex solver on the torus and the plane.

The governing system, in the reduced logarithmic variables u1 = ln|q|^2,
u2 = ln|p|^2, is

    lap u_i = a_i1 T(u_1) + a_i2 T(u_2)
              + 4 pi (sum of zero deltas - sum of pole deltas),

with T(u) = (e^u - 1)/(e^u + 1) = tanh(u/2).  The package provides the
closed-form predictions (feasibility, quantized fluxes, energies, decay
constants), a convex-minimization solver on both domains, a radial
ground-truth oracle, field diagnostics, and a CLI.
"""

from .discretization import DomainSpec, ScalarField, laplacian, integrate, \
    solve_poisson_torus, zero_field
from .model import PhysicalCouplings, CouplingMatrix, VortexConfiguration, \
    DecayRates, FluxPrediction, FeasibilityReport, couplings_from_physical, \
    check_torus_feasibility, decay_rates, predicted_fluxes
from .background import BackgroundData, plane_background, torus_background, \
    source_balance
from .solver import Problem, Solution, evaluate_functional, residual, solve
from .diagnostics import DiagnosticsReport, measure_fluxes, \
    reconstruct_fields, topological_energy, fit_decay_rate, diagnose
from .oracle import RadialProblem, RadialSolution, solve_radial

__all__ = [
    "DomainSpec", "ScalarField", "laplacian", "integrate",
    "solve_poisson_torus", "zero_field",
    "PhysicalCouplings", "CouplingMatrix", "VortexConfiguration",
    "DecayRates", "FluxPrediction", "FeasibilityReport",
    "couplings_from_physical", "check_torus_feasibility", "decay_rates",
    "predicted_fluxes",
    "BackgroundData", "plane_background", "torus_background",
    "source_balance",
    "Problem", "Solution", "evaluate_functional", "residual", "solve",
    "DiagnosticsReport", "measure_fluxes", "reconstruct_fields",
    "topological_energy", "fit_decay_rate", "diagnose",
    "RadialProblem", "RadialSolution", "solve_radial",
]
