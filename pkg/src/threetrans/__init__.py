"""Exact computations on 3-transposition groups of symplectic type, their
Fischer spaces, Matsuo algebras and the classification built on them."""
from __future__ import annotations

from .linalg import Inertia, RationalMatrix, inertia, nullspace, rank, rref, verify_spectrum
from .perm import Permutation, PermGroup, group_order
from .roots import RootSystem, build_root_system
from .fischer import FischerSpace, check_3transposition, from_f2_space, from_signed_roots, from_single_roots, is_symplectic_type
from .matsuo import FormClass, MatsuoAlgebra, build_matsuo, central_charge, check_axioms, classify_form, nondegenerate_quotient
from .griess import build_griess, verify_quotient_isomorphism
from .zhu import admissible_bipartitions, verify_coxeter_model
from .bounds import lattice_top_weight, run_all_cases, sigma_bound, top_weight_table
from .classify import Config, classify_all, reproduce_lemma_6_1, run_eliminations

__version__ = "0.1.0"
