import { describe, expect, it } from 'vitest';

import { pointInPolygon } from '../src/geometry.js';
import {
  decodeFragment,
  encodeFragment,
  initialViewState,
  selectFootprint,
  selectLasso,
  selectRect,
  summarizeSelection,
  withColorBy,
  withOverlayToggled,
  withSelection,
} from '../src/state.js';
import { loadFixtureBundle } from './helpers.js';

const bundle = loadFixtureBundle();

describe('initialViewState', () => {
  it('colors by hardness with marker shapes in class order', () => {
    const state = initialViewState(bundle);
    expect(state.colorBy).toBe('instance_hardness');
    expect(state.selection.size).toBe(0);
    const classes = bundle.manifest.class_names;
    expect(state.markerByClass.get(classes[0])).toBe('circle');
    expect(state.markerByClass.get(classes[1])).toBe('triangle');
  });
});

describe('withColorBy', () => {
  it('rejects columns the bundle does not carry', () => {
    const state = initialViewState(bundle);
    expect(() => withColorBy(bundle, state, 'nonsense')).toThrow(/not in the bundle/);
    expect(() => withColorBy(bundle, state, 'label')).toThrow(/not in the bundle/);
  });

  it('keeps the same selection set instance', () => {
    let state = initialViewState(bundle);
    state = withSelection(bundle, state, [1, 2, 3]);
    const next = withColorBy(bundle, state, 'kDN');
    expect(next.selection).toBe(state.selection);
  });
});

describe('withSelection', () => {
  it('rejects unknown ids', () => {
    const state = initialViewState(bundle);
    expect(() => withSelection(bundle, state, [99999])).toThrow(/unknown instance_id/);
  });
});

describe('selectRect', () => {
  it('a rectangle covering the whole plot selects everything', () => {
    let minX = Infinity;
    let maxX = -Infinity;
    let minY = Infinity;
    let maxY = -Infinity;
    for (let i = 0; i < bundle.instanceIds.length; i++) {
      minX = Math.min(minX, bundle.coords[2 * i]);
      maxX = Math.max(maxX, bundle.coords[2 * i]);
      minY = Math.min(minY, bundle.coords[2 * i + 1]);
      maxY = Math.max(maxY, bundle.coords[2 * i + 1]);
    }
    const all = selectRect(bundle, { x0: minX, y0: minY, x1: maxX, y1: maxY });
    expect(all.size).toBe(bundle.manifest.n_instances);
  });

  it('the boundary is inclusive: a point exactly on the edge is selected', () => {
    const x = bundle.coords[0];
    const y = bundle.coords[1];
    const hit = selectRect(bundle, { x0: x, y0: y, x1: x + 1e-9, y1: y + 1e-9 });
    expect(hit.has(bundle.instanceIds[0])).toBe(true);
  });
});

describe('selectLasso', () => {
  it('degenerate zero-area lassos select nothing', () => {
    expect(selectLasso(bundle, []).size).toBe(0);
    expect(selectLasso(bundle, [[0, 0], [1, 1]]).size).toBe(0);
    expect(selectLasso(bundle, [[0, 0], [1, 1], [2, 2]]).size).toBe(0);
  });

  it('agrees with a per-point containment recount', () => {
    const poly = [[-1, 0], [4, -1], [5, 4], [-2, 5]];
    const got = selectLasso(bundle, poly);
    const want = new Set<number>();
    bundle.instanceIds.forEach((id, i) => {
      if (pointInPolygon(bundle.coords[2 * i], bundle.coords[2 * i + 1], poly)) {
        want.add(id);
      }
    });
    expect(got).toEqual(want);
    expect(got.size).toBeGreaterThan(0);
  });
});

describe('selectFootprint', () => {
  it('equals a brute-force point-in-polygon recount for every owner', () => {
    for (const fp of bundle.footprints.owners) {
      const got = selectFootprint(bundle, fp.owner);
      const want = new Set<number>();
      bundle.instanceIds.forEach((id, i) => {
        const x = bundle.coords[2 * i];
        const y = bundle.coords[2 * i + 1];
        if (fp.polygons.some((poly) => pointInPolygon(x, y, poly))) {
          want.add(id);
        }
      });
      expect(got).toEqual(want);
    }
  });

  it('unknown owners are rejected', () => {
    expect(() => selectFootprint(bundle, 'mystery')).toThrow(/no footprint/);
  });
});

describe('summarizeSelection', () => {
  it('reports per-measure means of the selection against global means', () => {
    const ids = [bundle.instanceIds[0], bundle.instanceIds[1]];
    const summary = summarizeSelection(bundle, new Set(ids));
    const names = summary.map((s) => s.measure);
    expect(names).toEqual([...bundle.manifest.measure_names, 'instance_hardness']);
    const kdn = bundle.metadata.get('kDN')!;
    const row = summary.find((s) => s.measure === 'kDN')!;
    expect(row.selectionMean).toBeCloseTo((kdn[0] + kdn[1]) / 2, 12);
    let acc = 0;
    for (let i = 0; i < kdn.length; i++) {
      acc += kdn[i];
    }
    expect(row.globalMean).toBeCloseTo(acc / kdn.length, 12);
  });

  it('empty selection yields NaN selection means but keeps global means', () => {
    const summary = summarizeSelection(bundle, new Set());
    expect(Number.isNaN(summary[0].selectionMean)).toBe(true);
    expect(Number.isFinite(summary[0].globalMean)).toBe(true);
  });
});

describe('fragment round trip', () => {
  it('initial state encodes to nothing', () => {
    expect(encodeFragment(initialViewState(bundle))).toBe('');
  });

  it('state survives encode/decode', () => {
    let state = initialViewState(bundle);
    state = withColorBy(bundle, state, 'N1');
    state = withOverlayToggled(state, 'knn');
    state = withSelection(bundle, state, [3, 1, 7]);
    const decoded = decodeFragment(bundle, encodeFragment(state));
    expect(decoded.colorBy).toBe('N1');
    expect(decoded.overlay).toEqual(new Set(['knn']));
    expect(decoded.selection).toEqual(new Set([1, 3, 7]));
  });

  it('stale fragments fall back to defaults instead of failing', () => {
    const decoded = decodeFragment(bundle, '#c=not_a_column&o=ghost&s=1,99999,x');
    expect(decoded.colorBy).toBe('instance_hardness');
    expect(decoded.overlay.size).toBe(0);
    expect(decoded.selection).toEqual(new Set([1]));
  });
});
