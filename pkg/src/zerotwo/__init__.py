"""Numerical laboratory for cosine families and semigroups with matrix generators."""

from .family import CosineFamily, Generator, Semigroup
from .laws import classify, limsup_zero_estimate, norm_profile
from .linalg import op_norm
from .resolvent import resolvent_via_s, s_operator

__all__ = [
    "CosineFamily",
    "Generator",
    "Semigroup",
    "classify",
    "limsup_zero_estimate",
    "norm_profile",
    "op_norm",
    "resolvent_via_s",
    "s_operator",
]
__version__ = "0.1.0"
