"""Parametric tabletop object catalog.

Every object is a union of primitive surfaces (cylinders, discs, spheres,
torus arcs, boxes) sampled on a deterministic lattice, so each sample carries
an exact analytic outward normal and a part label. Local frames put +Z up
with the origin at the table contact; dimensions are meters at scale 1.

The catalog is engineered so that every class has exactly one part tagged
``grasp`` whose local geometry admits a parallel-jaw pinch of at most ~18 mm
(a tube, a neck, or a thin wall), keeping winning grasp translations within
1 cm of that part's surface samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Lattice pitch between adjacent surface samples. 2.8 mm gives ~12.8
# samples/cm^2, comfortably above the 4/cm^2 floor the renderer relies on.
SAMPLE_SPACING = 0.0028

AFFORDANCE_VOCAB = frozenset(
    {"grasp", "contain", "pour", "scoop", "pound", "screw", "cut"}
)

CLASS_NAMES = ("mug", "spoon", "hammer", "screwdriver", "bowl", "bottle", "pan")


@dataclass(frozen=True)
class PartDef:
    """One functional part: a name plus its affordance tags."""

    name: str
    tags: frozenset

    def __post_init__(self):
        if not self.tags <= AFFORDANCE_VOCAB:
            raise ValueError(f"unknown affordance tags: {self.tags - AFFORDANCE_VOCAB}")


@dataclass
class ObjectSurface:
    """Dense surface samples of one object in its local frame."""

    object_class: str
    parts: tuple
    points: np.ndarray      # (N, 3) float64
    normals: np.ndarray     # (N, 3) float64, unit, outward from material
    part_index: np.ndarray  # (N,) int32 into parts

    def part_names(self) -> tuple:
        return tuple(p.name for p in self.parts)

    def grasp_part(self) -> str:
        for p in self.parts:
            if "grasp" in p.tags:
                return p.name
        raise ValueError(f"{self.object_class} has no grasp-tagged part")


def _counts(length: float, spacing: float, minimum: int = 2) -> int:
    return max(minimum, int(math.ceil(length / spacing)) + 1)


def _ring(radius: float, spacing: float) -> np.ndarray:
    n = max(8, int(math.ceil(2.0 * math.pi * radius / spacing)))
    return np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)


def cylinder_side(radius, z0, z1, spacing=SAMPLE_SPACING, inward=False, center=(0.0, 0.0)):
    """Vertical cylinder wall between heights z0 and z1."""
    thetas = _ring(radius, spacing)
    zs = np.linspace(z0, z1, _counts(z1 - z0, spacing))
    t, z = np.meshgrid(thetas, zs)
    t, z = t.ravel(), z.ravel()
    nx, ny = np.cos(t), np.sin(t)
    pts = np.stack([center[0] + radius * nx, center[1] + radius * ny, z], axis=1)
    nrm = np.stack([nx, ny, np.zeros_like(nx)], axis=1)
    return pts, (-nrm if inward else nrm)


def disc(z, r0, r1, spacing=SAMPLE_SPACING, up=True, center=(0.0, 0.0)):
    """Horizontal annulus (or full disc when r0 = 0) at height z."""
    pts = []
    for r in np.linspace(r0, r1, _counts(r1 - r0, spacing)):
        if r < spacing * 0.25:
            pts.append([center[0], center[1], z])
            continue
        for t in _ring(r, spacing):
            pts.append([center[0] + r * math.cos(t), center[1] + r * math.sin(t), z])
    pts = np.array(pts, dtype=np.float64).reshape(-1, 3)
    nrm = np.tile([0.0, 0.0, 1.0 if up else -1.0], (len(pts), 1))
    return pts, nrm


def cylinder_x(radius, x0, x1, z_axis, spacing=SAMPLE_SPACING):
    """Horizontal cylinder wall with its axis along +X at height z_axis."""
    thetas = _ring(radius, spacing)
    xs = np.linspace(x0, x1, _counts(x1 - x0, spacing))
    t, x = np.meshgrid(thetas, xs)
    t, x = t.ravel(), x.ravel()
    ny, nz = np.cos(t), np.sin(t)
    pts = np.stack([x, radius * ny, z_axis + radius * nz], axis=1)
    nrm = np.stack([np.zeros_like(ny), ny, nz], axis=1)
    return pts, nrm


def disc_x(x, r0, r1, z_axis, spacing=SAMPLE_SPACING, outward=1.0):
    """Vertical annulus facing +/-X (cylinder end cap) centered at z_axis."""
    pts = []
    for r in np.linspace(r0, r1, _counts(r1 - r0, spacing)):
        if r < spacing * 0.25:
            pts.append([x, 0.0, z_axis])
            continue
        for t in _ring(r, spacing):
            pts.append([x, r * math.cos(t), z_axis + r * math.sin(t)])
    pts = np.array(pts, dtype=np.float64).reshape(-1, 3)
    nrm = np.tile([math.copysign(1.0, outward), 0.0, 0.0], (len(pts), 1))
    return pts, nrm


def sphere_shell(radius, theta0, theta1, spacing=SAMPLE_SPACING, inward=False,
                 center=(0.0, 0.0, 0.0)):
    """Spherical zone between polar angles theta0 < theta1 (from +Z)."""
    pts, nrm = [], []
    for th in np.linspace(theta0, theta1, _counts(radius * (theta1 - theta0), spacing)):
        ring_r = radius * math.sin(th)
        cz = radius * math.cos(th)
        if ring_r < spacing * 0.25:
            d = [0.0, 0.0, math.copysign(1.0, math.cos(th))]
            pts.append([center[0], center[1], center[2] + cz])
            nrm.append(d)
            continue
        for t in _ring(ring_r, spacing):
            d = [math.sin(th) * math.cos(t), math.sin(th) * math.sin(t), math.cos(th)]
            pts.append([center[0] + radius * d[0], center[1] + radius * d[1], center[2] + cz])
            nrm.append(d)
    pts = np.array(pts, dtype=np.float64).reshape(-1, 3)
    nrm = np.array(nrm, dtype=np.float64).reshape(-1, 3)
    return pts, (-nrm if inward else nrm)


def torus_arc(cx, cz, loop_r, tube_r, a0, a1, spacing=SAMPLE_SPACING):
    """Torus segment in the local X-Z plane (a handle loop).

    The loop center sits at (cx, 0, cz); arc angle a is measured in the X-Z
    plane from +X toward +Z. Normals point outward from the tube axis.
    """
    pts, nrm = [], []
    arc_steps = _counts(loop_r * (a1 - a0), spacing)
    betas = _ring(tube_r, spacing)
    for a in np.linspace(a0, a1, arc_steps):
        e1 = np.array([math.cos(a), 0.0, math.sin(a)])
        e2 = np.array([0.0, 1.0, 0.0])
        ring_c = np.array([cx, 0.0, cz]) + loop_r * e1
        for b in betas:
            d = math.cos(b) * e1 + math.sin(b) * e2
            pts.append(ring_c + tube_r * d)
            nrm.append(d)
    return np.array(pts).reshape(-1, 3), np.array(nrm).reshape(-1, 3)


def torus_ring(loop_r, tube_r, z0, spacing=SAMPLE_SPACING):
    """Full horizontal torus around the +Z axis (a rolled rim bead)."""
    pts, nrm = [], []
    betas = _ring(tube_r, spacing)
    for phi in _ring(loop_r, spacing):
        cp, sp = math.cos(phi), math.sin(phi)
        for b in betas:
            cb, sb = math.cos(b), math.sin(b)
            rho = loop_r + tube_r * cb
            pts.append([rho * cp, rho * sp, z0 + tube_r * sb])
            nrm.append([cb * cp, cb * sp, sb])
    return np.array(pts).reshape(-1, 3), np.array(nrm).reshape(-1, 3)


def box_faces(center, dims, spacing=SAMPLE_SPACING):
    """All six faces of an axis-aligned box given center and full extents."""
    cx, cy, cz = center
    hx, hy, hz = dims[0] / 2.0, dims[1] / 2.0, dims[2] / 2.0
    pts, nrm = [], []
    faces = [
        (0, +hx, (1, 2)), (0, -hx, (1, 2)),
        (1, +hy, (0, 2)), (1, -hy, (0, 2)),
        (2, +hz, (0, 1)), (2, -hz, (0, 1)),
    ]
    half = {0: hx, 1: hy, 2: hz}
    c = {0: cx, 1: cy, 2: cz}
    for axis, offset, (a, b) in faces:
        ga = np.linspace(-half[a], half[a], _counts(2 * half[a], spacing))
        gb = np.linspace(-half[b], half[b], _counts(2 * half[b], spacing))
        for va in ga:
            for vb in gb:
                p = [0.0, 0.0, 0.0]
                p[axis] = c[axis] + offset
                p[a] = c[a] + va
                p[b] = c[b] + vb
                n = [0.0, 0.0, 0.0]
                n[axis] = math.copysign(1.0, offset)
                pts.append(p)
                nrm.append(n)
    return np.array(pts).reshape(-1, 3), np.array(nrm).reshape(-1, 3)


def _assemble(object_class, parts, pieces, scale, spacing):
    """Glue (part_name -> list of (pts, nrm)) pieces into one ObjectSurface."""
    index_of = {p.name: i for i, p in enumerate(parts)}
    all_pts, all_nrm, all_idx = [], [], []
    for part_name, plist in pieces:
        for pts, nrm in plist:
            all_pts.append(pts)
            all_nrm.append(nrm)
            all_idx.append(np.full(len(pts), index_of[part_name], dtype=np.int32))
    points = np.concatenate(all_pts) * scale
    normals = np.concatenate(all_nrm)
    return ObjectSurface(
        object_class=object_class,
        parts=tuple(parts),
        points=points,
        normals=normals,
        part_index=np.concatenate(all_idx),
    )


def _build_mug(scale, spacing):
    parts = [
        PartDef("body", frozenset({"contain", "pour"})),
        PartDef("handle", frozenset({"grasp"})),
    ]
    body = [
        cylinder_side(0.040, 0.0, 0.055, spacing),
        cylinder_side(0.036, 0.004, 0.055, spacing, inward=True),
        disc(0.0, 0.0, 0.040, spacing, up=False),
        disc(0.004, 0.0, 0.036, spacing, up=True),
        disc(0.055, 0.036, 0.040, spacing, up=True),
    ]
    # Post handle: straight vertical bar joined to the wall by one low stub.
    # The bar tops out above the rim, so a band of it clears the body wall
    # and pinches like a free-standing tube from any yaw; keeping the stub
    # low leaves the upper bar free of anything an 8 mm contact corridor
    # could snag on.
    # The bar is an open tube: end caps would offer an upward face that
    # pairs with the stub underside into a sloppy whole-handle pinch.
    handle = [
        cylinder_side(0.007, 0.012, 0.068, spacing, center=(0.064, 0.0)),
        cylinder_x(0.005, 0.038, 0.062, 0.0175, spacing),
    ]
    return _assemble("mug", parts, [("body", body), ("handle", handle)], scale, spacing)


def _build_spoon(scale, spacing):
    parts = [
        PartDef("handle", frozenset({"grasp"})),
        PartDef("bowl", frozenset({"scoop", "contain"})),
    ]
    handle = [
        cylinder_x(0.007, 0.0, 0.110, 0.007, spacing),
        disc_x(0.0, 0.0, 0.007, 0.007, spacing, outward=-1.0),
    ]
    # Shallow shell open upward; cut plane z = 0.012, bottom touching z = 0.
    th_cut = math.acos(-0.6)  # outer radius 0.030, depth 0.012
    th_cut_in = math.acos(-18.0 / 27.0)
    bowl = [
        sphere_shell(0.030, th_cut, math.pi, spacing, center=(0.135, 0.0, 0.030)),
        sphere_shell(0.027, th_cut_in, math.pi, spacing, inward=True,
                     center=(0.135, 0.0, 0.030)),
        disc(0.012, 0.027 * math.sin(th_cut_in), 0.030 * math.sin(th_cut), spacing,
             up=True, center=(0.135, 0.0)),
    ]
    return _assemble("spoon", parts, [("handle", handle), ("bowl", bowl)], scale, spacing)


def _build_hammer(scale, spacing):
    parts = [
        PartDef("handle", frozenset({"grasp"})),
        PartDef("head", frozenset({"pound"})),
    ]
    handle = [
        cylinder_x(0.008, 0.0, 0.156, 0.008, spacing),
        disc_x(0.0, 0.0, 0.008, 0.008, spacing, outward=-1.0),
    ]
    head = [box_faces((0.168, 0.0, 0.015), (0.024, 0.070, 0.030), spacing)]
    return _assemble("hammer", parts, [("handle", handle), ("head", head)], scale, spacing)


def _build_screwdriver(scale, spacing):
    parts = [
        PartDef("handle", frozenset({"grasp"})),
        PartDef("shaft", frozenset({"screw"})),
    ]
    handle = [
        cylinder_x(0.008, 0.0, 0.095, 0.008, spacing),
        disc_x(0.0, 0.0, 0.008, 0.008, spacing, outward=-1.0),
        disc_x(0.095, 0.0035, 0.008, 0.008, spacing, outward=1.0),
    ]
    shaft = [
        cylinder_x(0.0035, 0.095, 0.175, 0.008, spacing),
        disc_x(0.175, 0.0, 0.0035, 0.008, spacing, outward=1.0),
    ]
    return _assemble(
        "screwdriver", parts, [("handle", handle), ("shaft", shaft)], scale, spacing
    )


def _build_bowl(scale, spacing):
    parts = [
        PartDef("body", frozenset({"contain", "scoop"})),
        PartDef("rim", frozenset({"grasp"})),
    ]
    # Footed bowl: a wide rolled rim carried by a narrow pedestal. A plain
    # thin wall is only ever seen from one side at a time, so the 15mm rim
    # bead is what offers two visible opposing faces near the lateral
    # silhouette. The pedestal sits 25mm radially inside the bead, beyond
    # finger reach for any tilt of the closing line, and the opening
    # exceeds the gripper stroke at every scale so a pinch across the
    # whole opening is never feasible.
    body = [
        cylinder_side(0.030, 0.0, 0.036, spacing),
        disc(0.0, 0.0, 0.030, spacing, up=False),
        disc(0.036, 0.0, 0.030, spacing, up=True),
    ]
    rim = [
        torus_ring(0.055, 0.0075, 0.0425, spacing),
    ]
    return _assemble("bowl", parts, [("body", body), ("rim", rim)], scale, spacing)


def _build_bottle(scale, spacing):
    parts = [
        PartDef("body", frozenset({"contain"})),
        PartDef("neck", frozenset({"grasp", "pour"})),
    ]
    body = [
        cylinder_side(0.032, 0.0, 0.130, spacing),
        disc(0.0, 0.0, 0.032, spacing, up=False),
        disc(0.130, 0.008, 0.032, spacing, up=True),
    ]
    # Tall neck keeps the preferred pinch zone (near the part centroid)
    # well below the lip, whose mixed wall/annulus neighborhoods skew
    # estimated normals.
    neck = [
        cylinder_side(0.008, 0.130, 0.175, spacing),
        cylinder_side(0.006, 0.165, 0.175, spacing, inward=True),
        disc(0.175, 0.006, 0.008, spacing, up=True),
    ]
    return _assemble("bottle", parts, [("body", body), ("neck", neck)], scale, spacing)


def _build_pan(scale, spacing):
    parts = [
        PartDef("body", frozenset({"contain"})),
        PartDef("handle", frozenset({"grasp"})),
    ]
    body = [
        cylinder_side(0.070, 0.0, 0.030, spacing),
        cylinder_side(0.066, 0.004, 0.030, spacing, inward=True),
        disc(0.0, 0.0, 0.070, spacing, up=False),
        disc(0.004, 0.0, 0.066, spacing, up=True),
        disc(0.030, 0.066, 0.070, spacing, up=True),
    ]
    handle = [
        cylinder_x(0.007, 0.070, 0.160, 0.024, spacing),
        disc_x(0.160, 0.0, 0.007, 0.024, spacing, outward=1.0),
    ]
    return _assemble("pan", parts, [("body", body), ("handle", handle)], scale, spacing)


_BUILDERS = {
    "mug": _build_mug,
    "spoon": _build_spoon,
    "hammer": _build_hammer,
    "screwdriver": _build_screwdriver,
    "bowl": _build_bowl,
    "bottle": _build_bottle,
    "pan": _build_pan,
}


def build_object(object_class: str, scale: float = 1.0,
                 spacing: float = SAMPLE_SPACING) -> ObjectSurface:
    """Sample one catalog object at the given scale. Deterministic."""
    if object_class not in _BUILDERS:
        raise ValueError(f"unknown object class {object_class!r}; know {sorted(_BUILDERS)}")
    if not (0.5 <= scale <= 2.0):
        raise ValueError(f"scale {scale} outside sane range [0.5, 2.0]")
    return _BUILDERS[object_class](scale, spacing)


def class_parts(object_class: str) -> tuple:
    """Part definitions for a class without building the full sample set."""
    return build_object(object_class, 1.0, spacing=0.01).parts


def grasp_part_name(object_class: str) -> str:
    """The class's canonical graspable part."""
    for p in class_parts(object_class):
        if "grasp" in p.tags:
            return p.name
    raise ValueError(f"{object_class} has no grasp-tagged part")
