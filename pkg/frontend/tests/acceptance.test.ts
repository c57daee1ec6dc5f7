/**
 * End-to-end checks for the explorer against a committed reference bundle
 * (produced by the pipeline CLI; see tests/fixture/config.json). One PASS
 * line per criterion.
 */

import { describe, expect, it } from 'vitest';

import { buildSelectionCsv, loadBundle } from '../src/bundle.js';
import { pointInRect, normalizeRect, Rect } from '../src/geometry.js';
import { computeScene, paintScene, PaintContext, Viewport } from '../src/scatter.js';
import { initialViewState, selectRect, withColorBy, withSelection } from '../src/state.js';
import { fixtureFetcher, readFixtureTexts } from './helpers.js';

const viewport: Viewport = { width: 800, height: 600, padding: 20 };

function report(name: string, detail: string): void {
  // eslint-disable-next-line no-console
  console.log(`[PASS] ${name}  (${detail})`);
}

class CountingContext implements PaintContext {
  fillStyle: string | object = '';
  strokeStyle: string | object = '';
  lineWidth = 1;
  globalAlpha = 1;
  fills = 0;

  clearRect(): void {}
  beginPath(): void {}
  moveTo(): void {}
  lineTo(): void {}
  closePath(): void {}
  arc(): void {}
  rect(): void {}
  fill(): void {
    this.fills++;
  }
  stroke(): void {}
}

describe('explorer acceptance', () => {
  it('renders one mark per bundle instance', async () => {
    const bundle = await loadBundle(fixtureFetcher());
    const n = bundle.manifest.n_instances;
    const scene = computeScene(bundle, initialViewState(bundle), viewport);
    expect(scene.marks.length).toBe(n);
    const ctx = new CountingContext();
    paintScene(ctx, scene, viewport);
    expect(ctx.fills).toBe(n);
    report('reference bundle renders n marks', `n = ${n}`);
  });

  it('a scripted rectangle over 3 known points returns exactly those ids', async () => {
    const bundle = await loadBundle(fixtureFetcher());
    const n = bundle.manifest.n_instances;

    // find three mutually-nearest points whose bounding box holds no one else
    let chosen: number[] | null = null;
    let rect: Rect | null = null;
    outer: for (let a = 0; a < n; a++) {
      const ax = bundle.coords[2 * a];
      const ay = bundle.coords[2 * a + 1];
      const byDist = [...Array(n).keys()]
        .filter((j) => j !== a)
        .sort(
          (p, q) =>
            (bundle.coords[2 * p] - ax) ** 2 + (bundle.coords[2 * p + 1] - ay) ** 2 -
            ((bundle.coords[2 * q] - ax) ** 2 + (bundle.coords[2 * q + 1] - ay) ** 2),
        );
      const triple = [a, byDist[0], byDist[1]];
      const xs = triple.map((i) => bundle.coords[2 * i]);
      const ys = triple.map((i) => bundle.coords[2 * i + 1]);
      const candidate = normalizeRect({
        x0: Math.min(...xs),
        y0: Math.min(...ys),
        x1: Math.max(...xs),
        y1: Math.max(...ys),
      });
      // oracle recount: exactly the triple inside?
      let count = 0;
      for (let i = 0; i < n; i++) {
        if (pointInRect(bundle.coords[2 * i], bundle.coords[2 * i + 1], candidate)) {
          count++;
        }
      }
      if (count === 3) {
        chosen = triple.map((i) => bundle.instanceIds[i]);
        rect = candidate;
        break outer;
      }
    }
    expect(chosen).not.toBeNull();
    const got = selectRect(bundle, rect!);
    expect([...got].sort((a, b) => a - b)).toEqual([...chosen!].sort((a, b) => a - b));
    report('rectangle selection over 3 known points', `ids ${[...chosen!].sort((a, b) => a - b).join(', ')}`);
  });

  it('exported rows carry the raw_records rows byte for byte', async () => {
    const bundle = await loadBundle(fixtureFetcher());
    const sourceLines = readFixtureTexts().get('raw_records.csv')!.split('\n');
    const picked = [0, 3, 17, 47];
    const body = buildSelectionCsv(bundle, new Set(picked));
    const lines = body.trimEnd().split('\n');
    expect(lines[0]).toBe(`${sourceLines[0]},instance_hardness`);
    lines.slice(1).forEach((line, i) => {
      const source = sourceLines[picked[i] + 1];
      // the record portion is the exact source bytes; IH is appended after
      expect(line.slice(0, source.length)).toBe(source);
      expect(line.slice(source.length)).toBe(`,${bundle.ihCells[picked[i]]}`);
    });
    report('export passes raw_records rows through byte-for-byte', `${picked.length} rows checked`);
  });

  it('switching color_by changes neither coordinates nor selection', async () => {
    const bundle = await loadBundle(fixtureFetcher());
    let state = withSelection(bundle, initialViewState(bundle), [2, 9, 30]);
    const before = computeScene(bundle, state, viewport);
    const selectionBefore = new Set(state.selection);

    const columns = ['kDN', 'N1', `algo_${bundle.manifest.algorithms[0]}_logloss`, bundle.rawColumns[0]];
    for (const column of columns) {
      state = withColorBy(bundle, state, column);
      const after = computeScene(bundle, state, viewport);
      after.marks.forEach((mark, i) => {
        expect(mark.x).toBe(before.marks[i].x);
        expect(mark.y).toBe(before.marks[i].y);
        expect(mark.selected).toBe(before.marks[i].selected);
      });
      expect(state.selection).toEqual(selectionBefore);
    }
    report('color_by switching leaves coordinates and selection unchanged', `${columns.length} columns cycled`);
  });
});
