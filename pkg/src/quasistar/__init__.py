"""Finite models of Hilbert quasi *-algebras and their tensor products."""

__version__ = "0.1.0"

from .algebra import AlgebraStructure, involute, multiply, verify_star_algebra
from .errors import DimensionMismatch, InvariantViolation, NotRepresentable, QuasiStarError, SpecError
from .functionals import (
    Functional,
    GnsTriple,
    SesqForm,
    check_condition_P,
    check_representable,
    check_sufficiency,
    closure_extension,
    functional_from_vector,
    gns,
    is_fully_representable,
    is_star_semisimple,
    positive_cone_test,
    riesz_vector,
    sesquilinear_form,
)
from .models import (
    TruncationFamily,
    build,
    build_function_model,
    build_group_algebra,
    build_matrix_algebra,
    build_product_group_algebra,
    build_symmetric_group_algebra,
    dyadic_family,
    truncation_scan,
)
from .quasi import (
    OperatorMatrix,
    QuasiPair,
    boundedness_norm,
    is_weakly_positive,
    left_mult_operator,
    right_mult_operator,
    vector_left_operator,
    verify_hilbert_axioms,
    verify_pair,
    verify_quasi_axioms,
)
from .report import CheckEntry, VerificationReport
from .specfile import parse_spec, write_spec
from .tensor import (
    TensorPair,
    build_tensor_pair,
    check_wb_inclusions,
    restrict_functional,
    schmidt_norm,
    tensor_elements,
    tensor_functional,
    tensor_operator,
)
