"""Cluster automorphisms induced by Legendrian loops: exact mutation, plabic
fence moves, named loops, folding, Grassmannian braid actions, dynamics and
positive fixed points."""

from .laurent import LaurentPoly
from .quiver import Quiver
from .seed import ClusterAutomorphism, Seed

__all__ = ["LaurentPoly", "Quiver", "Seed", "ClusterAutomorphism"]
__version__ = "0.1.0"
