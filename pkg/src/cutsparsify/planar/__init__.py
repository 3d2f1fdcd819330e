"""One-face planar instances: embeddings, the modified dual, and the sparsifier pipeline."""

from .cover import CoverInputError, covers, epsilon_cover
from .dual import (
    DecompositionError,
    DualError,
    DualInstance,
    PathDecomposition,
    build_dual,
    decompose_mincut_dual,
    dual_distances,
    one_two_node_check,
    reverse_dual,
)
from .embedding import (
    EmbeddedInstance,
    EmbeddingError,
    NotOneFaceError,
    SeparatorTerminalError,
    from_coordinates,
    from_neighbor_rotation,
    gen_grid_oneface,
    split_at_separator_terminals,
)
from .emulators import IdentityEmulator, PortalGreedyEmulator
from .pipeline import MisalignedEmulatorError, OneFaceResult, glue_sparsifiers, one_face_sparsify

__all__ = [name for name in dir() if not name.startswith("_")]
