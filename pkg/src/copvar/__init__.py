"""Laurent coefficients of concave univalent functions with a pole at p."""

from .cofunc import CoCandidate, LaurentTriple, laurent_closed, laurent_oracle
from .regions import Disc, RegionNotEstablished, a0_disc, a1_disc, residue_disc
from .schwarz import Blaschke, Constant, ConvexMix, MoebiusX, Rotation, format_spec, parse_spec

__version__ = "0.1.0"

__all__ = [
    "Blaschke",
    "CoCandidate",
    "Constant",
    "ConvexMix",
    "Disc",
    "LaurentTriple",
    "MoebiusX",
    "RegionNotEstablished",
    "Rotation",
    "a0_disc",
    "a1_disc",
    "format_spec",
    "laurent_closed",
    "laurent_oracle",
    "parse_spec",
    "residue_disc",
]
