"""Constructive symmetry-preserving hypergraph removal at desk scale."""
from .errors import *  # noqa: F401,F403
from .hypergraph import (DirectedHypergraph, HomCount, Homomorphism, PartiteHypergraph,
                         count_homomorphisms, edge_images, find_homomorphism, is_free,
                         new_directed, new_partite, subtract)

__version__ = "0.1.0"
