"""stripnest: semi-discrete bottom-left-fill nesting for irregular strip packing."""

from ._kernels import BACKEND
from .datasets import Dataset, load_bundled, load_dataset
from .geometry import Piece, Polygon, validate_and_normalize
from .placement import SolverConfig, base_resolution, pack, place_piece
from .search import SearchConfig, hill_climb
from .semidiscrete import SemiDiscretePiece, semidiscretize
from .oracle import interiors_intersect, reference_blf, verify_layout

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Dataset",
    "Piece",
    "Polygon",
    "SearchConfig",
    "SemiDiscretePiece",
    "SolverConfig",
    "base_resolution",
    "hill_climb",
    "interiors_intersect",
    "load_bundled",
    "load_dataset",
    "pack",
    "place_piece",
    "reference_blf",
    "semidiscretize",
    "validate_and_normalize",
    "verify_layout",
]
