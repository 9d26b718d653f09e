"""Exact verification of width-k systems of symmetric matrices and of the
universal Chern-class polynomials sigma_k(X, L)."""

from .linalg import (
    Matrix,
    SubspaceBasis,
    SymMatrix,
    common_kernel,
    congruence,
    kernel_basis,
    mat_rank,
    restrict_to_hyperplane,
    span_rank,
)
from .poly import MultiPoly, RingClass, TruncatedRing, det_linear_forms
from .width import (
    Witness,
    WidthReport,
    verify_witness,
    width_k_random,
    width_k_symbolic,
    width_k_symmetrized,
    width_subset_symbolic,
)
from .systems import (
    ClassifyReport,
    SpecialStructure,
    SymMatrixSystem,
    classify,
    detect_special,
    is_nk_system,
)
from .chern import (
    GeometryDescriptor,
    chern_of_geometry,
    segre_from_chern,
    sigma_class,
    sigma_pairing,
    sigma_universal,
)

__version__ = "0.1.0"
