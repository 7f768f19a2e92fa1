"""Exact klt decisions for B-stable pairs on flag and horospherical varieties."""
from .errors import KltError, NotQCartier
from .flagklt import FlagBoundary, beta_sequence, flag_discrepancies, is_klt_flag
from .horoklt import horospherical_discrepancies, is_klt_horospherical, pair_from_json
from .rootcore import Weight, build_root_system, pairing, parabolic, weyl_apply
from .toricres import Fan, ToricBoundary, pl_function, resolve_fan, toric_discrepancies

__all__ = [
    "Fan",
    "FlagBoundary",
    "KltError",
    "NotQCartier",
    "ToricBoundary",
    "Weight",
    "beta_sequence",
    "build_root_system",
    "flag_discrepancies",
    "horospherical_discrepancies",
    "is_klt_flag",
    "is_klt_horospherical",
    "pair_from_json",
    "pairing",
    "parabolic",
    "pl_function",
    "resolve_fan",
    "toric_discrepancies",
    "weyl_apply",
]
__version__ = "0.1.0"
