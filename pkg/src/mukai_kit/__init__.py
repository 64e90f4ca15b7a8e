"""Exact integer toolkit for Mukai lattices of K3 surfaces."""
from .lattice import (
    MukaiVector,
    NSLattice,
    classify,
    dualize,
    orth_basis,
    pair,
    reflect,
    square,
    twist,
    vector_from_chern,
)
from .families import build_family, check_hypotheses, family_coprime, family_general
from .numerics import filtration_oracle, mu_codim_bound, stratum_report
from .walls import AmpleConeSpec, chambers_rank2, enumerate_walls
from .certificates import plan_certificate, verify_certificate

__all__ = [
    "MukaiVector", "NSLattice", "classify", "dualize", "orth_basis", "pair", "reflect", "square",
    "twist", "vector_from_chern", "build_family", "check_hypotheses", "family_coprime",
    "family_general", "filtration_oracle", "mu_codim_bound", "stratum_report", "AmpleConeSpec",
    "chambers_rank2", "enumerate_walls", "plan_certificate", "verify_certificate",
]
__version__ = "0.1.0"
