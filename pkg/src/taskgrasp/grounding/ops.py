"""Two-step visual grounding: object box, masked image, part mask.

Step one localizes the named object to a bounding box; the image is then
blanked outside that box; step two segments the part on the masked image.
Running part segmentation on the masked image keeps clutter pixels out of
the part mask by construction, and the final mask is clipped to the box so
the containment invariant holds no matter what a backend returns.
"""

from __future__ import annotations

import numpy as np

from ..errors import OutOfBounds, PartNotFound
from ..geometry import BoundingBox, PixelMask
from .backends import GroundingBackend


def locate_object(image: np.ndarray, object_label: str,
                  backend: GroundingBackend) -> BoundingBox:
    """Highest-confidence box for the label."""
    image = np.asarray(image, dtype=np.uint8)
    if image.size == 0:
        raise ValueError("image is empty")
    box, _ = backend.locate_object(image, object_label)
    if not box.fits_within(image.shape[1], image.shape[0]):
        raise OutOfBounds(f"backend box {box} exceeds image bounds")
    return box


def mask_image(image: np.ndarray, box: BoundingBox) -> np.ndarray:
    """Copy of the image with everything outside the box set to exact zero."""
    image = np.asarray(image, dtype=np.uint8)
    h, w = image.shape[:2]
    if not box.fits_within(w, h):
        raise OutOfBounds(f"box {box} exceeds {w}x{h} image")
    out = np.zeros_like(image)
    out[box.v_min:box.v_max, box.u_min:box.u_max] = (
        image[box.v_min:box.v_max, box.u_min:box.u_max]
    )
    return out


def _box_from_content(masked_image: np.ndarray) -> BoundingBox:
    """Tight bounds of the non-blanked region of a masked image."""
    nonzero = np.any(np.asarray(masked_image) != 0, axis=2)
    vs, us = np.nonzero(nonzero)
    if vs.size == 0:
        return BoundingBox(0, 0, 0, 0)
    return BoundingBox(int(us.min()), int(vs.min()), int(us.max()) + 1, int(vs.max()) + 1)


def ground_affordance(masked_image: np.ndarray, part: str, affordance: str,
                      backend: GroundingBackend,
                      box: BoundingBox | None = None) -> PixelMask:
    """Segment the part on the masked image; result clipped to the box.

    ``box`` should be the box the masked image was produced with; when
    omitted it is recovered as the tight bounds of the unblanked content.
    """
    masked_image = np.asarray(masked_image, dtype=np.uint8)
    if box is None:
        box = _box_from_content(masked_image)
    mask, _ = backend.segment_part(masked_image, box, part, affordance)
    clipped = np.zeros_like(mask.bits)
    clipped[box.v_min:box.v_max, box.u_min:box.u_max] = (
        mask.bits[box.v_min:box.v_max, box.u_min:box.u_max]
    )
    result = PixelMask(clipped)
    if result.count == 0:
        raise PartNotFound(f"no '{part}' pixels inside {box}")
    return result


def ground(image: np.ndarray, reasoning, backend: GroundingBackend):
    """Full composition; short-circuits on the first failing step.

    ``reasoning`` needs ``object``, ``part`` and ``affordance`` attributes.
    Returns (box, mask) so both land in the run trace.
    """
    box = locate_object(image, reasoning.object, backend)
    masked = mask_image(image, box)
    mask = ground_affordance(masked, reasoning.part, reasoning.affordance, backend, box)
    return box, mask
