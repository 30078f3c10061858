/**
 * Pixel-layer helpers for the mask overlay.
 *
 * The mask is painted into its own RGBA layer rather than onto the scene
 * image, so the exact set of masked pixels can be read back (alpha > 0) and
 * re-encoded without loss. Compositing onto the scene happens last and never
 * mutates either input.
 */

export type Rgb = [number, number, number];

export interface Layer {
  width: number;
  height: number;
  /** RGBA, row-major, length width * height * 4. */
  data: Uint8ClampedArray;
}

export function emptyLayer(width: number, height: number): Layer {
  if (!Number.isInteger(width) || !Number.isInteger(height) || width < 0 || height < 0) {
    throw new Error(`invalid layer size ${width}x${height}`);
  }
  return { width, height, data: new Uint8ClampedArray(width * height * 4) };
}

export function cloneLayer(layer: Layer): Layer {
  return { width: layer.width, height: layer.height, data: new Uint8ClampedArray(layer.data) };
}

/**
 * Paint mask bits into a fresh copy of the layer. Pixels where bits is zero
 * are cleared so the layer's alpha channel is exactly the mask.
 */
export function paintMask(layer: Layer, bits: Uint8Array, color: Rgb, alpha: number): Layer {
  if (bits.length !== layer.width * layer.height) {
    throw new Error(`bits length ${bits.length} does not match ${layer.width}x${layer.height}`);
  }
  // alpha 0 would erase the painted pixels and break exact read-back
  if (!Number.isInteger(alpha) || alpha < 1 || alpha > 255) {
    throw new Error(`alpha must be in [1, 255], got ${alpha}`);
  }
  const out = cloneLayer(layer);
  const [r, g, b] = color;
  for (let i = 0; i < bits.length; i++) {
    const o = i * 4;
    if (bits[i]) {
      out.data[o] = r;
      out.data[o + 1] = g;
      out.data[o + 2] = b;
      out.data[o + 3] = alpha;
    } else {
      out.data[o] = 0;
      out.data[o + 1] = 0;
      out.data[o + 2] = 0;
      out.data[o + 3] = 0;
    }
  }
  return out;
}

/** Read the mask back out of a layer: any pixel with alpha > 0 counts as set. */
export function exportLayerBits(layer: Layer): Uint8Array {
  const bits = new Uint8Array(layer.width * layer.height);
  for (let i = 0; i < bits.length; i++) {
    if (layer.data[i * 4 + 3] > 0) bits[i] = 1;
  }
  return bits;
}

/** Source-over compositing; returns a new layer, inputs untouched. */
export function compositeOver(base: Layer, overlay: Layer): Layer {
  if (base.width !== overlay.width || base.height !== overlay.height) {
    throw new Error("layer sizes differ");
  }
  const out = cloneLayer(base);
  for (let i = 0; i < base.width * base.height; i++) {
    const o = i * 4;
    const a = overlay.data[o + 3] / 255;
    if (a === 0) continue;
    for (let c = 0; c < 3; c++) {
      out.data[o + c] = Math.round(overlay.data[o + c] * a + base.data[o + c] * (1 - a));
    }
    out.data[o + 3] = Math.max(base.data[o + 3], overlay.data[o + 3]);
  }
  return out;
}

/**
 * Stroke the outline of a [u_min, v_min, u_max, v_max] box into a copy of
 * the layer. Grounding boxes have exclusive maxima, so the right/bottom
 * stroke sits just outside the region, which is where an outline belongs.
 */
export function strokeBox(
  layer: Layer,
  box: [number, number, number, number],
  color: Rgb,
  alpha = 255,
  thickness = 2,
): Layer {
  const [u0, v0, u1, v1] = box;
  const out = cloneLayer(layer);
  const put = (u: number, v: number) => {
    if (u < 0 || v < 0 || u >= out.width || v >= out.height) return;
    const o = (v * out.width + u) * 4;
    out.data[o] = color[0];
    out.data[o + 1] = color[1];
    out.data[o + 2] = color[2];
    out.data[o + 3] = alpha;
  };
  for (let t = 0; t < thickness; t++) {
    for (let u = u0; u <= u1; u++) {
      put(u, v0 + t);
      put(u, v1 - t);
    }
    for (let v = v0; v <= v1; v++) {
      put(u0 + t, v);
      put(u1 - t, v);
    }
  }
  return out;
}
