"""Run-length codec for binary pixel masks.

Row-major counts of alternating runs, starting with a zero-run (which may be
empty). The encoding is exact: decode(encode(m)) == m for every mask, and it
is what the HTTP service and the remote grounding protocol exchange.
"""

from __future__ import annotations

import numpy as np

from ..geometry import PixelMask


def encode_rle(mask: PixelMask) -> dict:
    flat = mask.bits.ravel()
    n = flat.size
    if n == 0:
        return {"size": [mask.height, mask.width], "counts": []}
    edges = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    bounds = np.concatenate(([0], edges, [n]))
    counts = np.diff(bounds).tolist()
    if flat[0]:
        counts.insert(0, 0)  # runs always start with a zero-run
    return {"size": [mask.height, mask.width], "counts": counts}


def decode_rle(encoded: dict) -> PixelMask:
    h, w = (int(v) for v in encoded["size"])
    counts = [int(c) for c in encoded["counts"]]
    if any(c < 0 for c in counts):
        raise ValueError("negative run length")
    total = sum(counts)
    if total != h * w:
        raise ValueError(f"runs cover {total} pixels, mask has {h * w}")
    flat = np.zeros(h * w, dtype=bool)
    pos = 0
    value = False
    for c in counts:
        if value:
            flat[pos:pos + c] = True
        pos += c
        value = not value
    return PixelMask(flat.reshape(h, w))
