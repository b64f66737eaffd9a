"""Multi-parameter affine Hecke algebras of rank 1 and 2.

Exact Coxeter/Bernstein multiplication engines, the representations entering
the rank-1 and rank-2 Plancherel decompositions (principal series, induced
families, calibrated modules, one-dimensional catalogs), and numerical
verification of the Plancherel formulas against the canonical trace.
"""

from .root_data import (
    CONFIGURATIONS,
    Character,
    RootDatum,
    UnsupportedConfiguration,
    WeylElement,
    build_root_datum,
    datum_from_tag,
    enumerate_weyl,
    inversion_set,
    weyl_act_char,
)
from .hecke_core import HeckeAlgebra, HeckeElement, Params, make_params

__all__ = [
    "CONFIGURATIONS",
    "Character",
    "HeckeAlgebra",
    "HeckeElement",
    "Params",
    "RootDatum",
    "UnsupportedConfiguration",
    "WeylElement",
    "build_root_datum",
    "datum_from_tag",
    "enumerate_weyl",
    "inversion_set",
    "make_params",
    "weyl_act_char",
]

__version__ = "0.1.0"
