/** ViewState construction, selection semantics, and the URL fragment. */

import { colorableColumns } from './bundle.js';
import { normalizeRect, pointInPolygon, pointInRect, polygonArea, Rect } from './geometry.js';
import { Bundle, MarkerShape, MARKER_ORDER, ViewState } from './types.js';

export function initialViewState(bundle: Bundle): ViewState {
  const markerByClass = new Map<string, MarkerShape>();
  bundle.manifest.class_names.forEach((name, i) => {
    markerByClass.set(name, MARKER_ORDER[i % MARKER_ORDER.length]);
  });
  return {
    colorBy: 'instance_hardness',
    overlay: new Set<string>(),
    selection: new Set<number>(),
    markerByClass,
  };
}

/**
 * Change the colored column. Coordinates and selection are untouched by
 * construction: the returned state reuses the same selection set.
 */
export function withColorBy(bundle: Bundle, state: ViewState, column: string): ViewState {
  if (!colorableColumns(bundle).includes(column)) {
    throw new Error(`color_by column '${column}' is not in the bundle`);
  }
  return { ...state, colorBy: column };
}

export function withOverlayToggled(state: ViewState, owner: string): ViewState {
  const overlay = new Set(state.overlay);
  if (overlay.has(owner)) {
    overlay.delete(owner);
  } else {
    overlay.add(owner);
  }
  return { ...state, overlay };
}

export function withSelection(bundle: Bundle, state: ViewState, ids: Iterable<number>): ViewState {
  const known = new Set(bundle.instanceIds);
  const selection = new Set<number>();
  for (const id of ids) {
    if (!known.has(id)) {
      throw new Error(`selection contains unknown instance_id ${id}`);
    }
    selection.add(id);
  }
  return { ...state, selection };
}

/** Instances whose embedding falls inside the rectangle, boundary inclusive. */
export function selectRect(bundle: Bundle, rect: Rect): Set<number> {
  const r = normalizeRect(rect);
  const out = new Set<number>();
  bundle.instanceIds.forEach((id, i) => {
    if (pointInRect(bundle.coords[2 * i], bundle.coords[2 * i + 1], r)) {
      out.add(id);
    }
  });
  return out;
}

/** Instances inside a lasso polygon; degenerate (zero-area) lassos select nothing. */
export function selectLasso(bundle: Bundle, polygon: number[][]): Set<number> {
  if (polygon.length < 3 || polygonArea(polygon) === 0.0) {
    return new Set();
  }
  const out = new Set<number>();
  bundle.instanceIds.forEach((id, i) => {
    if (pointInPolygon(bundle.coords[2 * i], bundle.coords[2 * i + 1], polygon)) {
      out.add(id);
    }
  });
  return out;
}

/** Instances inside any polygon of one owner's footprint. */
export function selectFootprint(bundle: Bundle, owner: string): Set<number> {
  const fp = bundle.footprints.owners.find((o) => o.owner === owner);
  if (fp === undefined) {
    throw new Error(`no footprint for owner '${owner}'`);
  }
  const out = new Set<number>();
  bundle.instanceIds.forEach((id, i) => {
    const x = bundle.coords[2 * i];
    const y = bundle.coords[2 * i + 1];
    if (fp.polygons.some((poly) => pointInPolygon(x, y, poly))) {
      out.add(id);
    }
  });
  return out;
}

export interface MeasureSummary {
  measure: string;
  selectionMean: number;
  globalMean: number;
}

/** Per-measure means of the selection next to the global means. */
export function summarizeSelection(bundle: Bundle, selection: Set<number>): MeasureSummary[] {
  const rows: number[] = [];
  bundle.instanceIds.forEach((id, i) => {
    if (selection.has(id)) {
      rows.push(i);
    }
  });
  const names = [...bundle.manifest.measure_names, 'instance_hardness'];
  return names.map((measure) => {
    const values = bundle.metadata.get(measure)!;
    let global = 0.0;
    for (let i = 0; i < values.length; i++) {
      global += values[i];
    }
    let sel = 0.0;
    for (const i of rows) {
      sel += values[i];
    }
    return {
      measure,
      selectionMean: rows.length > 0 ? sel / rows.length : NaN,
      globalMean: values.length > 0 ? global / values.length : NaN,
    };
  });
}

/**
 * Shareable fragment: #c=<column>&o=<owner,owner>&s=<id,id,id>.
 * Only what differs from the initial state is written.
 */
export function encodeFragment(state: ViewState): string {
  const parts: string[] = [];
  if (state.colorBy !== 'instance_hardness') {
    parts.push(`c=${encodeURIComponent(state.colorBy)}`);
  }
  if (state.overlay.size > 0) {
    parts.push(`o=${[...state.overlay].sort().map(encodeURIComponent).join(',')}`);
  }
  if (state.selection.size > 0) {
    parts.push(`s=${[...state.selection].sort((a, b) => a - b).join(',')}`);
  }
  return parts.length > 0 ? `#${parts.join('&')}` : '';
}

/** Rebuild a ViewState from a fragment; anything invalid falls back silently. */
export function decodeFragment(bundle: Bundle, fragment: string): ViewState {
  let state = initialViewState(bundle);
  const body = fragment.startsWith('#') ? fragment.slice(1) : fragment;
  if (body === '') {
    return state;
  }
  const fields = new Map<string, string>();
  for (const part of body.split('&')) {
    const eq = part.indexOf('=');
    if (eq > 0) {
      fields.set(part.slice(0, eq), part.slice(eq + 1));
    }
  }
  const color = fields.get('c');
  if (color !== undefined) {
    try {
      state = withColorBy(bundle, state, decodeURIComponent(color));
    } catch {
      /* stale column: keep default */
    }
  }
  const owners = fields.get('o');
  if (owners !== undefined) {
    const valid = new Set(bundle.footprints.owners.map((o) => o.owner));
    for (const owner of owners.split(',').map(decodeURIComponent)) {
      if (valid.has(owner)) {
        state = withOverlayToggled(state, owner);
      }
    }
  }
  const sel = fields.get('s');
  if (sel !== undefined) {
    const known = new Set(bundle.instanceIds);
    const ids = sel
      .split(',')
      .map((s) => Number(s))
      .filter((id) => Number.isInteger(id) && known.has(id));
    state = { ...state, selection: new Set(ids) };
  }
  return state;
}
