/** Containment tests matching the pipeline's footprint geometry bit for bit. */

export interface Rect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export function normalizeRect(r: Rect): Rect {
  return {
    x0: Math.min(r.x0, r.x1),
    y0: Math.min(r.y0, r.y1),
    x1: Math.max(r.x0, r.x1),
    y1: Math.max(r.y0, r.y1),
  };
}

/** Axis-aligned rectangle containment, boundary inclusive. */
export function pointInRect(x: number, y: number, r: Rect): boolean {
  return r.x0 <= x && x <= r.x1 && r.y0 <= y && y <= r.y1;
}

/**
 * Ray-casting containment with the boundary counted as inside.
 *
 * This mirrors the pipeline's own test, including the order of arithmetic
 * operations, so a point sits inside a serialized footprint polygon here
 * exactly when the pipeline counted it inside.
 */
export function pointInPolygon(px: number, py: number, polygon: number[][]): boolean {
  const k = polygon.length;
  let inside = false;
  for (let i = 0; i < k; i++) {
    const [ax, ay] = polygon[i];
    const [bx, by] = polygon[(i + 1) % k];
    const cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    if (
      cross === 0.0 &&
      Math.min(ax, bx) <= px && px <= Math.max(ax, bx) &&
      Math.min(ay, by) <= py && py <= Math.max(ay, by)
    ) {
      return true;
    }
    if (ay > py !== by > py) {
      const xHit = ax + ((py - ay) * (bx - ax)) / (by - ay);
      if (xHit > px) {
        inside = !inside;
      }
    }
  }
  return inside;
}

/** Signed shoelace area; zero for degenerate (collapsed) lassos. */
export function polygonArea(polygon: number[][]): number {
  const k = polygon.length;
  if (k < 3) {
    return 0.0;
  }
  let acc = 0.0;
  for (let i = 0; i < k; i++) {
    const [ax, ay] = polygon[i];
    const [bx, by] = polygon[(i + 1) % k];
    acc += ax * by - bx * ay;
  }
  return acc / 2.0;
}
