"""Exact and certified computation in the Hensel-Steinitz algebra HS(s)."""

__version__ = "0.1.0"

from .algebra import (  # noqa: E402
    AlgebraError,
    Element,
    NotContractiveError,
    exp_i,
    gen_toeplitz,
    matrix_unit,
    neumann_inverse_defect,
    proj_below,
    toeplitz,
    verify_crossed_product_relations,
)
from .derivations import (  # noqa: E402
    Decomposition,
    DLambda,
    DPhi,
    GeneratorImages,
    Inner,
    covariant_solve,
    decompose,
    fourier_component_of_derivation,
    is_inner_certificate,
)
from .intervals import NormValue  # noqa: E402
from .ktheory import K0Class, index_pairing, k0_class, winding_number  # noqa: E402
from .norms import ck_norm, hs_norm, mn_norm, n_norm  # noqa: E402
from .sadic import SAdicInt, snorm, valuation_split  # noqa: E402
from .symbols import DiagonalSymbol  # noqa: E402
from .trig import LambdaSymbol, TrigPoly  # noqa: E402

__all__ = [
    "AlgebraError",
    "DLambda",
    "DPhi",
    "Decomposition",
    "DiagonalSymbol",
    "Element",
    "GeneratorImages",
    "Inner",
    "K0Class",
    "LambdaSymbol",
    "NormValue",
    "NotContractiveError",
    "SAdicInt",
    "TrigPoly",
    "ck_norm",
    "covariant_solve",
    "decompose",
    "exp_i",
    "fourier_component_of_derivation",
    "gen_toeplitz",
    "hs_norm",
    "index_pairing",
    "is_inner_certificate",
    "k0_class",
    "matrix_unit",
    "mn_norm",
    "n_norm",
    "neumann_inverse_defect",
    "proj_below",
    "snorm",
    "toeplitz",
    "valuation_split",
    "verify_crossed_product_relations",
    "winding_number",
]
