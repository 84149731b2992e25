"""Combinatorial and numeric rigidity of pinned subspace-incidence systems."""

from .certificate import Certificate, RigidityVerdict, Status, check_certificate, find_certificate
from .framework import Framework, import_pins, sample_generic
from .hypergraph import HyperEdge, WeightedHypergraph, count_check, expand, overpinned_screen, validate
from .instances import fixture, load_instance
from .mapdecomp import MapDecomposition, pebble_game
from .rigidmatrix import assemble, generic_rank

__all__ = [
    "Certificate", "Framework", "HyperEdge", "MapDecomposition", "RigidityVerdict", "Status",
    "WeightedHypergraph", "assemble", "check_certificate", "count_check", "expand",
    "find_certificate", "fixture", "generic_rank", "import_pins", "load_instance",
    "overpinned_screen", "pebble_game", "sample_generic", "validate",
]
