"""Common zeros of homogeneous polynomial systems over finite fields.

Closed-form bounds, extremal constructions, close-family structure checks
and exhaustive or randomised zero-count searches.
"""

from .bounds import (
    BoundParams,
    conjecture_bound,
    hp_affine,
    hp_bound_explicit,
    hp_bound_general,
    ideal_dim_oracle,
    ideal_dim_rd,
    lachaud_bound,
    serre_bound,
    tb_bound_explicit,
    tb_bound_general,
    validity,
)
from .closefam import (
    CorrelationProfile,
    SetFamily,
    correlation_profile,
    is_coprime_close,
    poly_structure,
    set_structure,
)
from .constructions import fermat_family, line_family, tb_maximal_family
from .errors import *  # noqa: F401,F403
from .familyio import format_family, parse_family, read_family
from .gf import FieldElem, FieldSpec, field_make
from .polyspace import HomPoly, Poly, PolyFamily, format_poly, gcd, gcd_many, parse_poly
from .projgeom import ZeroCount, count_affine_zeros, count_proj_zeros, pk, proj_points
from .search import (
    SearchReport,
    conjecture_probe,
    exhaustive_affine_max,
    exhaustive_max,
    random_probe,
    serre_sharpness_audit,
)

__version__ = "0.1.0"
