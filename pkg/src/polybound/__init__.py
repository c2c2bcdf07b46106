"""Simplicial polytopes approximating balls: face numbers, homology of
induced subcomplexes, stresses, and experiment drivers."""

from .complex import SimplicialComplex, induced, link
from .enumeration import FaceVector, GVector, HVector, g_from_f, h_from_f, is_m_sequence, shadow
from .geometry import Polytope, convex_hull, hausdorff_to_ball
from .homology import betti, reduced_betti

__version__ = "0.1.0"
