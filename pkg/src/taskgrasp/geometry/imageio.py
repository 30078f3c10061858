"""On-disk image and intrinsics formats.

Depth: single-channel 16-bit PNG holding unsigned millimeters.
RGB:   8-bit 3-channel PNG.
Label map: single-channel 16-bit PNG (see scene.render for the encoding).
Intrinsics: plain-text key-value document with fx, fy, cx, cy, width, height.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image

from .types import CameraIntrinsics, DepthImage

INTRINSICS_FIELDS = ("fx", "fy", "cx", "cy", "width", "height")


def _uint16_image(arr: np.ndarray) -> Image.Image:
    # Pillow deprecated passing mode= for dtype conversion; build from the
    # raw buffer instead to keep the 16-bit encoding explicit.
    arr = np.ascontiguousarray(arr, dtype=np.uint16)
    return Image.frombytes("I;16", (arr.shape[1], arr.shape[0]), arr.tobytes())


def save_depth_png(depth: DepthImage, path: str | Path) -> None:
    _uint16_image(depth.to_millimeters()).save(path, format="PNG")


def load_depth_png(path: str | Path) -> DepthImage:
    img = Image.open(path)
    arr = np.asarray(img)
    if arr.dtype != np.uint16:
        arr = arr.astype(np.uint16)
    return DepthImage.from_millimeters(arr)


def depth_png_bytes(depth: DepthImage) -> bytes:
    buf = io.BytesIO()
    _uint16_image(depth.to_millimeters()).save(buf, format="PNG")
    return buf.getvalue()


def depth_from_png_bytes(data: bytes) -> DepthImage:
    arr = np.asarray(Image.open(io.BytesIO(data)))
    return DepthImage.from_millimeters(arr.astype(np.uint16))


def save_rgb_png(rgb: np.ndarray, path: str | Path) -> None:
    Image.fromarray(np.asarray(rgb, dtype=np.uint8), mode="RGB").save(path, format="PNG")


def load_rgb_png(path: str | Path) -> np.ndarray:
    return np.asarray(Image.open(path).convert("RGB"), dtype=np.uint8)


def rgb_png_bytes(rgb: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(np.asarray(rgb, dtype=np.uint8), mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def rgb_from_png_bytes(data: bytes) -> np.ndarray:
    return np.asarray(Image.open(io.BytesIO(data)).convert("RGB"), dtype=np.uint8)


def save_label_png(labels: np.ndarray, path: str | Path) -> None:
    arr = np.asarray(labels)
    if arr.size and (arr.min() < 0 or arr.max() > 65535):
        raise ValueError("label values must fit in uint16")
    _uint16_image(arr).save(path, format="PNG")


def load_label_png(path: str | Path) -> np.ndarray:
    return np.asarray(Image.open(path)).astype(np.int32)


def mask_png_bytes(bits: np.ndarray) -> bytes:
    """Binary mask as an 8-bit PNG (0 / 255), for trace artifacts."""
    buf = io.BytesIO()
    img = (np.asarray(bits, dtype=bool).astype(np.uint8)) * 255
    Image.fromarray(img, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def mask_from_png_bytes(data: bytes) -> np.ndarray:
    return np.asarray(Image.open(io.BytesIO(data)).convert("L")) > 127


def save_intrinsics(intr: CameraIntrinsics, path: str | Path) -> None:
    lines = [f"{name}: {getattr(intr, name)}" for name in INTRINSICS_FIELDS]
    Path(path).write_text("\n".join(lines) + "\n")


def load_intrinsics(path: str | Path) -> CameraIntrinsics:
    values: dict[str, float] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(":")
        key = key.strip()
        if key in INTRINSICS_FIELDS:
            values[key] = float(value.strip())
    missing = [f for f in INTRINSICS_FIELDS if f not in values]
    if missing:
        raise ValueError(f"intrinsics file {path} is missing fields: {missing}")
    return CameraIntrinsics(
        fx=values["fx"],
        fy=values["fy"],
        cx=values["cx"],
        cy=values["cy"],
        width=int(values["width"]),
        height=int(values["height"]),
    )
