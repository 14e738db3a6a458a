"""Exact WZ-pair machinery and accelerated series evaluation."""

from .accel import (
    build_omega_s,
    build_omega_st,
    build_omega_str,
    combine_to_closed_form,
    identity_formula2,
    series_formula1,
    series_formula3,
    series_formula4,
)
from .catalog import CatalogEntry, load_pair, save_pair
from .evaluate import check_boundary_vanishing, convergence_grid, eval_series, verify_identity_numeric
from .exact import Polynomial, RationalFunction, ratfunc_equal, ratfunc_normalize, solve_linear
from .hyperterm import LinearForm, ProperTerm, eval_exact, normal_form, shift_ratio, substitute_affine
from .wz import WZForm, WZForm3, find_companion, gosper, to_certificate_form, verify_wz, verify_wz3

__version__ = "0.1.0"

__all__ = [
    "CatalogEntry", "LinearForm", "Polynomial", "ProperTerm", "RationalFunction", "WZForm", "WZForm3",
    "build_omega_s", "build_omega_st", "build_omega_str", "check_boundary_vanishing",
    "combine_to_closed_form", "convergence_grid", "eval_exact", "eval_series", "find_companion",
    "gosper", "identity_formula2", "load_pair", "normal_form", "ratfunc_equal", "ratfunc_normalize",
    "save_pair", "series_formula1", "series_formula3", "series_formula4", "shift_ratio",
    "solve_linear", "substitute_affine", "to_certificate_form", "verify_identity_numeric",
    "verify_wz", "verify_wz3",
]
