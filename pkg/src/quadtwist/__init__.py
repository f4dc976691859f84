"""Exact arithmetic for quadratic twists of elliptic curves over Q.

Curve models, Tate's algorithm, twist Tamagawa laws, and a batch
verification harness for the even-two-power identities satisfied by
local invariants under a split/inert hypothesis on the discriminant.
"""

from .arith import (
    Factorization,
    FundamentalDiscriminant,
    factorize,
    fundamental_discriminant,
    fundamental_discriminants,
    is_fundamental_discriminant,
    kronecker,
    omega,
    squarefree_part,
    valuation,
)
from .curves import (
    IsoMap,
    MinimalModelResult,
    SingularModelError,
    WeierstrassModel,
    apply_iso,
    invariants,
    iso,
    minimal_model,
    model,
    quadratic_twist,
    two_strongly_minimal,
)
from .localred import (
    LocalReduction,
    c_tilde,
    conductor,
    inert_base_change_tamagawa,
    tate_local,
    twist_prime_tamagawa_odd,
)
from .profile_scan import ProfileScanResult, scan_profiles
from .twistlaws import (
    SetupError,
    TwistSetup,
    pair_twist_quantity,
    symbol_closed_form,
    tamagawa_symbol_check,
    tamagawa_transfer_check,
    tamagawa_transfer_product_check,
    twist_quantity,
    u_of_discriminant,
    validate_setup,
)

__all__ = [
    "Factorization",
    "FundamentalDiscriminant",
    "IsoMap",
    "LocalReduction",
    "MinimalModelResult",
    "ProfileScanResult",
    "SetupError",
    "SingularModelError",
    "TwistSetup",
    "WeierstrassModel",
    "apply_iso",
    "c_tilde",
    "conductor",
    "factorize",
    "fundamental_discriminant",
    "fundamental_discriminants",
    "inert_base_change_tamagawa",
    "invariants",
    "is_fundamental_discriminant",
    "iso",
    "kronecker",
    "minimal_model",
    "model",
    "omega",
    "pair_twist_quantity",
    "quadratic_twist",
    "scan_profiles",
    "squarefree_part",
    "symbol_closed_form",
    "tamagawa_symbol_check",
    "tamagawa_transfer_check",
    "tamagawa_transfer_product_check",
    "tate_local",
    "twist_prime_tamagawa_odd",
    "twist_quantity",
    "two_strongly_minimal",
    "u_of_discriminant",
    "validate_setup",
    "valuation",
]

__version__ = "0.1.0"
