"""
Golden-value verification suite.
"""

from .fixtures import centrality_pair, load_fixtures, wl_pair, write_fixtures
from .suite import CHECK_NAMES, run_suite

__all__ = ["CHECK_NAMES", "centrality_pair", "load_fixtures", "run_suite", "wl_pair", "write_fixtures"]
