import { describe, expect, it } from 'vitest';

import { normalizeRect, pointInPolygon, pointInRect, polygonArea } from '../src/geometry.js';
import { loadFixtureBundle } from './helpers.js';

/**
 * Independent convex-containment oracle: inside iff the point is on the
 * non-negative side of every CCW edge. Only valid for convex rings, which
 * is exactly what the pipeline serializes.
 */
function convexOracle(px: number, py: number, poly: number[][]): boolean {
  const k = poly.length;
  for (let i = 0; i < k; i++) {
    const [ax, ay] = poly[i];
    const [bx, by] = poly[(i + 1) % k];
    if ((bx - ax) * (py - ay) - (by - ay) * (px - ax) < 0) {
      return false;
    }
  }
  return true;
}

describe('pointInRect', () => {
  it('is boundary inclusive on all four edges', () => {
    const r = normalizeRect({ x0: 1, y0: 1, x1: 3, y1: 2 });
    expect(pointInRect(1, 1.5, r)).toBe(true);
    expect(pointInRect(3, 1.5, r)).toBe(true);
    expect(pointInRect(2, 1, r)).toBe(true);
    expect(pointInRect(2, 2, r)).toBe(true);
    expect(pointInRect(0.999, 1.5, r)).toBe(false);
  });

  it('normalizes flipped corners', () => {
    const r = normalizeRect({ x0: 3, y0: 2, x1: 1, y1: 1 });
    expect(pointInRect(2, 1.5, r)).toBe(true);
  });
});

describe('pointInPolygon', () => {
  const square = [[0, 0], [2, 0], [2, 2], [0, 2]];

  it('counts interior, boundary, and vertices as inside', () => {
    expect(pointInPolygon(1, 1, square)).toBe(true);
    expect(pointInPolygon(0, 1, square)).toBe(true);
    expect(pointInPolygon(2, 2, square)).toBe(true);
    expect(pointInPolygon(1, 0, square)).toBe(true);
  });

  it('excludes exterior points', () => {
    expect(pointInPolygon(2.0001, 1, square)).toBe(false);
    expect(pointInPolygon(-0.0001, 1, square)).toBe(false);
    expect(pointInPolygon(1, 2.5, square)).toBe(false);
  });

  it('matches the convex oracle on every fixture polygon', () => {
    const bundle = loadFixtureBundle();
    let checked = 0;
    for (const fp of bundle.footprints.owners) {
      for (const poly of fp.polygons) {
        const xs = poly.map((p) => p[0]);
        const ys = poly.map((p) => p[1]);
        const pad = 0.3;
        const lo = [Math.min(...xs) - pad, Math.min(...ys) - pad];
        const hi = [Math.max(...xs) + pad, Math.max(...ys) + pad];
        // deterministic lattice probe over the padded bounding box
        for (let i = 0; i <= 12; i++) {
          for (let j = 0; j <= 12; j++) {
            const px = lo[0] + ((hi[0] - lo[0]) * i) / 12;
            const py = lo[1] + ((hi[1] - lo[1]) * j) / 12;
            expect(pointInPolygon(px, py, poly)).toBe(convexOracle(px, py, poly));
            checked++;
          }
        }
      }
    }
    expect(checked).toBeGreaterThan(1000);
  });
});

describe('polygonArea', () => {
  it('unit square is exactly one', () => {
    expect(polygonArea([[0, 0], [1, 0], [1, 1], [0, 1]])).toBe(1.0);
  });

  it('degenerate rings are zero', () => {
    expect(polygonArea([[0, 0], [1, 1]])).toBe(0.0);
    expect(polygonArea([[0, 0], [1, 1], [2, 2]])).toBe(0.0);
  });
});
