import type { RleMask } from "./types.js";

export interface DecodedMask {
  height: number;
  width: number;
  /** Row-major, one byte per pixel, 0 or 1. */
  bits: Uint8Array;
}

function checkRun(count: number): void {
  if (!Number.isInteger(count) || count < 0) {
    throw new Error(`invalid run length ${count}`);
  }
}

export function decodeRle(mask: RleMask): DecodedMask {
  const [height, width] = mask.size;
  if (!Number.isInteger(height) || !Number.isInteger(width) || height < 0 || width < 0) {
    throw new Error(`invalid mask size [${mask.size}]`);
  }
  const total = height * width;
  const bits = new Uint8Array(total);
  let pos = 0;
  let value = 0;
  for (const count of mask.counts) {
    checkRun(count);
    if (pos + count > total) {
      throw new Error(`runs cover more than ${total} pixels`);
    }
    if (value) {
      bits.fill(1, pos, pos + count);
    }
    pos += count;
    value ^= 1;
  }
  if (pos !== total) {
    throw new Error(`runs cover ${pos} of ${total} pixels`);
  }
  return { height, width, bits };
}

/** Inverse of decodeRle; counts always start with the zero run. */
export function encodeRle(decoded: DecodedMask): RleMask {
  const { height, width, bits } = decoded;
  if (bits.length !== height * width) {
    throw new Error(`bits length ${bits.length} does not match ${height}x${width}`);
  }
  const counts: number[] = [];
  if (bits.length > 0) {
    let value = 0;
    let run = 0;
    for (let i = 0; i < bits.length; i++) {
      const bit = bits[i] ? 1 : 0;
      if (bit === value) {
        run += 1;
      } else {
        counts.push(run);
        value = bit;
        run = 1;
      }
    }
    counts.push(run);
  }
  return { size: [height, width], counts };
}

export function countOnes(bits: Uint8Array): number {
  let n = 0;
  for (let i = 0; i < bits.length; i++) {
    if (bits[i]) n += 1;
  }
  return n;
}
