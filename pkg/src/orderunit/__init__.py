"""Numerical laboratory for order units in finite-dimensional normed spaces."""

__version__ = "0.1.0"

from .norms import DELTA, EPS, INF, AdjoinL1, AdjoinLinf, Lp, OrderUnitNormOf, norm, dual_norm
from .order import (
    OrderUnitSpace,
    cone_membership,
    from_norming_unit,
    l1_ice,
    linf_natural,
    lorentz,
    order_unit_norm,
    reals,
)
from .nou import Status, Witness, check_nou, falsify, paper_witness, verify_exact
from .adjoin import adjoin_order_unit, adjoin_base, iterate_adjoin_l1, spin_factor
