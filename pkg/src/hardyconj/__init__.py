"""
Conjugations on ``L^2(C^d)`` and ``H^2(C^d)`` over the unit circle.

Symbols are matrix Laurent polynomials with exact coefficient arithmetic.
The subpackages build structured antilinear operators ``M_U J*`` and
``M_U J~``, certify operator-valued inner functions, work in model spaces
``K_Theta`` and expose a registry of verification cases with a command line
front end.
"""

from .antilinear import (
    Block2Conjugation,
    ConjugationError,
    Kind,
    Mode,
    PointConjugation,
    SpaceConjugation,
    antilinear_sharp,
    block2_check,
    check_Mz_relation,
    extract_symbol,
    make_canonical,
    make_structured,
    preserves_H2,
    random_structured,
    rebase,
    verify_axioms,
)
from .circfield import (
    CircleField,
    OperatorSymbol,
    apply_symbol,
    inner_product,
    is_analytic,
    is_unitary_valued,
    project_plus,
    symbol_multiply,
    symbol_transform,
)
from .innerfun import InnerCertificate, NotInnerError, certify_inner, divides, quotient, theta_sharp
from .modelspace import ModelContext, PreconditionError, kernel, make_C_Theta_J, project_KTheta

__version__ = "0.1.0"

__all__ = [
    "Block2Conjugation",
    "CircleField",
    "ConjugationError",
    "InnerCertificate",
    "Kind",
    "Mode",
    "ModelContext",
    "NotInnerError",
    "OperatorSymbol",
    "PointConjugation",
    "PreconditionError",
    "SpaceConjugation",
    "antilinear_sharp",
    "apply_symbol",
    "block2_check",
    "certify_inner",
    "check_Mz_relation",
    "divides",
    "extract_symbol",
    "inner_product",
    "is_analytic",
    "is_unitary_valued",
    "kernel",
    "make_C_Theta_J",
    "make_canonical",
    "make_structured",
    "preserves_H2",
    "project_KTheta",
    "project_plus",
    "quotient",
    "random_structured",
    "rebase",
    "symbol_multiply",
    "symbol_transform",
    "theta_sharp",
    "verify_axioms",
]
