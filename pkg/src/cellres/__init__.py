"""Cellular free resolutions of monomial modules attached to integer lattices."""
from .exactmath import IntMatrix, UnboundedError, hnf, snf, integer_homology
from .lattice import (LatticeEmbedding, QuotientGrading, embedding_from_basis, lattice_from_toric_embedding,
                      lawrence_lift, quotient_grading, saturate)
from .cellcomplex import PeriodicCellComplex, build_periodic_complex, build_custom_complex, fh_p2_complex, sublevel_complex
from .stratify import Stratification, CompatibilityError, ceiling, anderson, lcm_from_vertices, check_compatible
from .rescomplex import (GradedFreeComplex, build_resolution, check_d_squared, minimality, compare_graded_iso,
                         monomial_module_generators, closure_generators, ml_membership, betti_table)
from .verify import pointedness_check, acyclicity_scan, resolution_certificate

__version__ = "0.1.0"
