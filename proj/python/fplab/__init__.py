"""Python bindings for the fplab Fokker-Planck verification lab."""

from ._core import (
    CoefficientSet,
    FplabError,
    Grid,
    ScalarField,
    Solution,
    __version__,
    commutator_norms,
    energy_audit,
    gen_coefficients,
    h_minus1_norm,
    lp_norm,
    make_initial,
    mollify,
    run_study,
    sde_law_distance,
    sobolev_norm,
    solve,
    validate_scenario,
)

__all__ = [
    "CoefficientSet",
    "FplabError",
    "Grid",
    "ScalarField",
    "Solution",
    "__version__",
    "commutator_norms",
    "energy_audit",
    "gen_coefficients",
    "h_minus1_norm",
    "lp_norm",
    "make_initial",
    "mollify",
    "run_study",
    "sde_law_distance",
    "sobolev_norm",
    "solve",
    "validate_scenario",
]
