"""Truncated Toeplitz operators on Bergman spaces of the disk and annulus."""

from .domains import Domain, QuadratureRule, build_quadrature, integrate, integrate_adaptive
from .symbols import Symbol, Term, classify, fourier_profiles, parse_symbol
from .bergman import (BasisIndexSet, CoeffVector, analytic_decompose, basis_norm_sq, eval_basis,
                      project_basis, project_kernel)
from .toeplitz import (TruncatedOperator, apply, commutator, interior_block, norms,
                       toeplitz_entry, toeplitz_matrix)
from .lab import (ExperimentReport, MomentTable, run_annulus_counterexample, run_commute_check,
                  run_harmonic_pair, run_moment_scan, run_proof_identity, run_radial_diagonality)

__version__ = "0.1.0"
