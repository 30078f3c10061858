"""Grounding backends: label-map oracle and remote segmentation client.

The oracle reads the renderer's ground-truth labels, so synthetic runs get
exact boxes and masks with zero inference. The remote client wraps any
open-vocabulary detector/part-segmenter behind a small HTTP schema; images
go out resized to 224x224 and masks come back run-length encoded, upscaled
here with nearest-neighbor to keep them binary.
"""

from __future__ import annotations

import base64
import io
import os
from dataclasses import dataclass
from typing import Protocol

import httpx
import numpy as np
from PIL import Image

from ..errors import BackendUnavailable, ObjectNotFound, PartNotFound
from ..geometry import BoundingBox, PixelMask
from .rle import decode_rle

REMOTE_SIDE = 224  # images are resized to this square before remote calls


class GroundingBackend(Protocol):
    def locate_object(self, image: np.ndarray, label: str) -> tuple: ...

    def segment_part(self, masked_image: np.ndarray, box: BoundingBox,
                     part: str, affordance: str) -> tuple: ...


def _tight_box(bits: np.ndarray) -> BoundingBox:
    vs, us = np.nonzero(bits)
    return BoundingBox(int(us.min()), int(vs.min()), int(us.max()) + 1, int(vs.max()) + 1)


@dataclass
class OracleGroundingBackend:
    """Exact grounding from a rendered observation's label map.

    The affordance string is accepted for interface parity and ignored: the
    ground truth already knows which pixels belong to the part. Ties between
    same-class instances go to the one with more visible pixels, then the
    lower object id.
    """

    observation: object  # RenderedObservation

    def locate_object(self, image: np.ndarray, label: str) -> tuple:
        obs = self.observation
        wanted = str(label).lower()
        best_id, best_count = None, 0
        for oid in sorted(obs.legend):
            object_class, _ = obs.legend[oid]
            if object_class.lower() != wanted:
                continue
            count = int(obs.object_mask(oid).sum())
            if count > best_count:
                best_id, best_count = oid, count
        if best_id is None:
            raise ObjectNotFound(f"no visible '{label}' in the scene")
        return _tight_box(obs.object_mask(best_id)), 1.0

    def segment_part(self, masked_image: np.ndarray, box: BoundingBox,
                     part: str, affordance: str) -> tuple:
        obs = self.observation
        if box.is_empty:
            raise PartNotFound(f"empty box for part '{part}'")
        region = obs.label_map[box.v_min:box.v_max, box.u_min:box.u_max]
        ids, counts = np.unique(region[region > 0] // 256, return_counts=True)
        if ids.size == 0:
            raise PartNotFound(f"no labeled pixels inside {box}")
        best_id = int(ids[np.lexsort((ids, -counts))[0]])

        _, parts = obs.legend[best_id]
        if part not in parts:
            raise PartNotFound(
                f"object {best_id} has parts {list(parts)}, not '{part}'"
            )
        bits = np.zeros_like(obs.label_map, dtype=bool)
        bits[box.v_min:box.v_max, box.u_min:box.u_max] = (
            region == obs.label_value(best_id, part)
        )
        if not bits.any():
            raise PartNotFound(f"part '{part}' not visible inside {box}")
        return PixelMask(bits), 1.0


@dataclass
class RemoteGroundingBackend:
    """HTTP client for an open-vocabulary grounding service.

    POST {base_url}/locate   {"image_b64": png, "query": label}
         -> {"detections": [{"box": [u0, v0, u1, v1], "confidence": c}, ...]}
            (box in 224x224 coordinates)
    POST {base_url}/segment  {"image_b64": png, "query": "<part> for <affordance>"}
         -> {"masks": [{"rle": {...}, "confidence": c}, ...]}  (224x224 masks)

    Detection tie-break: highest confidence, then largest area, then first
    listed. Mask results are upscaled to the native resolution with
    nearest-neighbor so bits stay binary.
    """

    base_url: str
    timeout_s: float = 30.0
    api_key_env: str = "TASKGRASP_API_KEY"

    def _post(self, route: str, body: dict) -> dict:
        headers = {}
        api_key = os.environ.get(self.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        try:
            resp = httpx.post(
                self.base_url.rstrip("/") + route,
                json=body,
                headers=headers,
                timeout=self.timeout_s,
            )
            resp.raise_for_status()
            return resp.json()
        except httpx.HTTPError as exc:
            raise BackendUnavailable(f"grounding service: {exc}") from exc

    @staticmethod
    def _encode_resized(image: np.ndarray) -> str:
        small = Image.fromarray(image, mode="RGB").resize(
            (REMOTE_SIDE, REMOTE_SIDE), Image.BILINEAR
        )
        buf = io.BytesIO()
        small.save(buf, format="PNG")
        return base64.b64encode(buf.getvalue()).decode("ascii")

    def locate_object(self, image: np.ndarray, label: str) -> tuple:
        h, w = image.shape[:2]
        payload = self._post(
            "/locate", {"image_b64": self._encode_resized(image), "query": str(label)}
        )
        detections = payload.get("detections", [])
        if not detections:
            raise ObjectNotFound(f"service found no '{label}'")

        def rank(item):
            i, det = item
            u0, v0, u1, v1 = det["box"]
            return (-float(det.get("confidence", 0.0)), -(u1 - u0) * (v1 - v0), i)

        _, best = min(enumerate(detections), key=rank)
        u0, v0, u1, v1 = best["box"]
        sx, sy = w / REMOTE_SIDE, h / REMOTE_SIDE
        box = BoundingBox(
            max(0, int(round(u0 * sx))),
            max(0, int(round(v0 * sy))),
            min(w, int(round(u1 * sx))),
            min(h, int(round(v1 * sy))),
        )
        return box, float(best.get("confidence", 0.0))

    def segment_part(self, masked_image: np.ndarray, box: BoundingBox,
                     part: str, affordance: str) -> tuple:
        h, w = masked_image.shape[:2]
        payload = self._post(
            "/segment",
            {
                "image_b64": self._encode_resized(masked_image),
                "query": f"{part} for {affordance}",
            },
        )
        masks = payload.get("masks", [])
        if not masks:
            raise PartNotFound(f"service found no '{part}'")
        best = max(enumerate(masks), key=lambda it: (float(it[1].get("confidence", 0.0)), -it[0]))[1]
        small = decode_rle(best["rle"])
        native = Image.fromarray(small.bits).resize((w, h), Image.NEAREST)
        return PixelMask(np.asarray(native, dtype=bool)), float(best.get("confidence", 0.0))
