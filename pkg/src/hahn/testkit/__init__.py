"""Random generators, naive oracles and property suites for self-testing."""

from .generators import MATRIX_CLASSES, GenConfig, Generator
from .oracles import enumerate_group_families, oracle_apply, oracle_closure
from .suites import PROPERTIES, Property, run_all, run_property, shrink

__all__ = [
    "MATRIX_CLASSES", "GenConfig", "Generator",
    "enumerate_group_families", "oracle_apply", "oracle_closure",
    "PROPERTIES", "Property", "run_all", "run_property", "shrink",
]
