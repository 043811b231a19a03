"""Exceptional collections from the Hanlon-Hicks-Lazarev resolution of the diagonal
on smooth projective toric Fano varieties."""

__version__ = "0.1.0"

from .fan import Fan, class_group, unimodular, bondal_criterion, fano_check, walls
from .cohomology import CohomologyEngine, line_bundle_cohomology
from .resolution import enumerate_cells, resolution_rank_vector, bondal_thomsen_collection
from .exceptional import certify
from .database import load_database, get_variety
