"""Two-step visual grounding: object box, masked image, part mask."""

from .backends import (
    REMOTE_SIDE,
    GroundingBackend,
    OracleGroundingBackend,
    RemoteGroundingBackend,
)
from .ops import ground, ground_affordance, locate_object, mask_image
from .rle import decode_rle, encode_rle

__all__ = [
    "GroundingBackend",
    "OracleGroundingBackend",
    "REMOTE_SIDE",
    "RemoteGroundingBackend",
    "decode_rle",
    "encode_rle",
    "ground",
    "ground_affordance",
    "locate_object",
    "mask_image",
]
