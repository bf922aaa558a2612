"""Exact K-group and Chow-ring calculator for a pair of derived-equivalent Calabi-Yau threefolds."""
from .arith import MultiDegree, Rational, binomial, chi_proj, chi_proj_product, sym_dim
from .errors import KMutError, MutationError, UnsupportedOperation, UnsupportedPairing
from .ktheory import (
    SPACE_H,
    SPACE_P,
    SPACE_P4xP1,
    SPACES,
    BundleSpace,
    FiberAtom,
    HyperSpace,
    KClass,
    LineAtom,
    ProjProduct,
    chi,
    chi_line,
    chi_pair,
    dual,
    euler_on_Y,
    exc_div_class,
    fiber,
    line,
    pushforward_to_base,
    tensor_line,
)

__version__ = "0.1.0"
