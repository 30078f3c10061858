/**
 * Minimal orthographic 3D projection for the point cloud and gripper glyphs.
 * Math only; canvas drawing lives in main.ts.
 */

import type { GraspRecord } from "./types.js";

export type Vec3 = [number, number, number];

export interface Segment {
  a: Vec3;
  b: Vec3;
  kind: "finger" | "palm" | "approach";
}

function add(a: Vec3, b: Vec3): Vec3 {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}

function scale(a: Vec3, s: number): Vec3 {
  return [a[0] * s, a[1] * s, a[2] * s];
}

function sub(a: Vec3, b: Vec3): Vec3 {
  return add(a, scale(b, -1));
}

export function norm(a: Vec3): number {
  return Math.hypot(a[0], a[1], a[2]);
}

function column(rotation: number[][], index: number): Vec3 {
  return [rotation[0][index], rotation[1][index], rotation[2][index]];
}

/**
 * Line segments depicting a two-finger gripper: the fingers close along the
 * rotation's first column, the approach arrow points along its third column
 * toward the grasp point.
 */
export function gripperGlyph(grasp: GraspRecord, fingerLength = 0.04, arrowLength = 0.03): Segment[] {
  const closing = column(grasp.rotation, 0);
  const approach = column(grasp.rotation, 2);
  const t = grasp.translation as Vec3;
  const half = grasp.width / 2;

  const tipA = add(t, scale(closing, half));
  const tipB = add(t, scale(closing, -half));
  const backA = sub(tipA, scale(approach, fingerLength));
  const backB = sub(tipB, scale(approach, fingerLength));
  const palmMid = sub(t, scale(approach, fingerLength));
  const arrowTail = sub(palmMid, scale(approach, arrowLength));

  return [
    { a: backA, b: tipA, kind: "finger" },
    { a: backB, b: tipB, kind: "finger" },
    { a: backA, b: backB, kind: "palm" },
    { a: arrowTail, b: palmMid, kind: "approach" },
  ];
}

export interface OrbitCamera {
  target: Vec3;
  /** Radians around the vertical axis. */
  yaw: number;
  /** Radians above the horizontal plane, clamped to avoid gimbal flips. */
  pitch: number;
  /** Pixels per scene unit. */
  zoom: number;
}

const PITCH_LIMIT = Math.PI / 2 - 0.05;

export function rotateCamera(camera: OrbitCamera, dYaw: number, dPitch: number): OrbitCamera {
  const pitch = Math.max(-PITCH_LIMIT, Math.min(PITCH_LIMIT, camera.pitch + dPitch));
  return { ...camera, yaw: camera.yaw + dYaw, pitch };
}

export function zoomCamera(camera: OrbitCamera, factor: number): OrbitCamera {
  return { ...camera, zoom: Math.max(1e-6, camera.zoom * factor) };
}

interface Basis {
  right: Vec3;
  up: Vec3;
}

function cameraBasis(camera: OrbitCamera): Basis {
  const { yaw, pitch } = camera;
  const right: Vec3 = [Math.cos(yaw), 0, -Math.sin(yaw)];
  const up: Vec3 = [
    -Math.sin(yaw) * Math.sin(pitch),
    Math.cos(pitch),
    -Math.cos(yaw) * Math.sin(pitch),
  ];
  return { right, up };
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

export interface Viewport {
  width: number;
  height: number;
}

/** Orthographic projection of a scene point to canvas pixels. */
export function projectPoint(point: Vec3, camera: OrbitCamera, viewport: Viewport): [number, number] {
  const { right, up } = cameraBasis(camera);
  const d = sub(point, camera.target);
  const x = viewport.width / 2 + dot(d, right) * camera.zoom;
  const y = viewport.height / 2 - dot(d, up) * camera.zoom;
  return [x, y];
}

export function projectPoints(points: number[][], camera: OrbitCamera, viewport: Viewport): Float32Array {
  const { right, up } = cameraBasis(camera);
  const out = new Float32Array(points.length * 2);
  const cx = viewport.width / 2;
  const cy = viewport.height / 2;
  for (let i = 0; i < points.length; i++) {
    const p = points[i];
    const dx = p[0] - camera.target[0];
    const dy = p[1] - camera.target[1];
    const dz = p[2] - camera.target[2];
    out[i * 2] = cx + (dx * right[0] + dy * right[1] + dz * right[2]) * camera.zoom;
    out[i * 2 + 1] = cy - (dx * up[0] + dy * up[1] + dz * up[2]) * camera.zoom;
  }
  return out;
}

/** Center the cloud's bounding box and zoom so it fills `fill` of the viewport. */
export function fitCamera(points: number[][], viewport: Viewport, fill = 0.8): OrbitCamera {
  if (points.length === 0) {
    return { target: [0, 0, 0], yaw: 0, pitch: 0, zoom: 1 };
  }
  const lo: Vec3 = [Infinity, Infinity, Infinity];
  const hi: Vec3 = [-Infinity, -Infinity, -Infinity];
  for (const p of points) {
    for (let c = 0; c < 3; c++) {
      lo[c] = Math.min(lo[c], p[c]);
      hi[c] = Math.max(hi[c], p[c]);
    }
  }
  const target: Vec3 = [(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2];
  // bbox diagonal bounds the projected radius for any camera orientation
  const diagonal = Math.max(norm(sub(hi, lo)), 1e-6);
  const zoom = (Math.min(viewport.width, viewport.height) * fill) / diagonal;
  return { target, yaw: 0, pitch: 0, zoom };
}
