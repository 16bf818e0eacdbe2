"""
DeepMap

Graph classification with aligned vertex feature maps: substructure features
per vertex, centrality-ordered receptive fields and a shared 1D CNN, with
graph kernel baselines and stratified cross-validation.
"""

__version__ = "0.1.0"

from .config import Config, load_config
from .errors import DeepMapError

__all__ = ["Config", "DeepMapError", "load_config"]
