"""Affine Weyl groups, class polynomials and affine Deligne-Lusztig varieties."""

from .adlv import top_components, verify_theorem_a
from .affineweyl import AffineElt, FrobeniusAction, affine_weyl
from .classpoly import class_polynomials
from .elements import format_element, parse_element
from .errors import AdlvLabError
from .rootdata import GroupDatum, load_group, load_preset, resolve_group
from .sigmaconj import enumerate_b_g_mu

__all__ = [
    "AdlvLabError",
    "AffineElt",
    "FrobeniusAction",
    "GroupDatum",
    "affine_weyl",
    "class_polynomials",
    "enumerate_b_g_mu",
    "format_element",
    "load_group",
    "load_preset",
    "parse_element",
    "resolve_group",
    "top_components",
    "verify_theorem_a",
]
