"""Free Euler equations on polynomials in a semicircular system."""

__version__ = "0.1.0"

from .algebra import BiTensor, NcPoly, VectorField, bracket, cyclic_diff, cyclic_grad, directional, free_diff
from .euler import SimConfig, SimState, b_form, euler_rhs, pressure_rhs, simulate, step, vorticity, vorticity_moments
from .leray import build_leray_basis, leray_project, recover_pressure
from .parsing import format_field, format_poly, parse_field, parse_poly
from .semicircular import trace

__all__ = [
    "BiTensor", "NcPoly", "VectorField", "bracket", "cyclic_diff", "cyclic_grad", "directional",
    "free_diff", "SimConfig", "SimState", "b_form", "euler_rhs", "pressure_rhs", "simulate", "step",
    "vorticity", "vorticity_moments", "build_leray_basis", "leray_project", "recover_pressure",
    "format_field", "format_poly", "parse_field", "parse_poly", "trace",
]
