/** Bundle loading: fetch all seven files, validate, parse into memory. */

import { numericColumn, parseCsv, CsvError } from './csv.js';
import {
  Bundle,
  BundleLoadError,
  BUNDLE_FILES,
  Fetcher,
  FootprintsFile,
  Manifest,
  ModelFile,
  RankingFile,
} from './types.js';

/** Fetcher over the pipeline's HTTP server (/bundle/<name>). */
export function httpFetcher(baseUrl: string): Fetcher {
  const root = baseUrl.replace(/\/$/, '');
  return async (name) => {
    const resp = await fetch(`${root}/bundle/${name}`);
    if (!resp.ok) {
      throw new Error(`HTTP ${resp.status}`);
    }
    return resp.text();
  };
}

/** Fetcher over files the user dropped into the page. */
export function droppedFilesFetcher(files: Map<string, string>): Fetcher {
  return async (name) => {
    const body = files.get(name);
    if (body === undefined) {
      throw new Error('file not provided');
    }
    return body;
  };
}

/**
 * Fetch all seven files concurrently, then parse and cross-validate.
 * Any inconsistency throws BundleLoadError naming the offending file;
 * nothing renders off a half-valid bundle.
 */
export async function loadBundle(fetcher: Fetcher): Promise<Bundle> {
  const texts = new Map<string, string>();
  await Promise.all(
    BUNDLE_FILES.map(async (name) => {
      let body: string;
      try {
        body = await fetcher(name);
      } catch (err) {
        throw new BundleLoadError(name, `fetch failed (${(err as Error).message})`);
      }
      texts.set(name, body);
    }),
  );
  return parseBundle(texts);
}

export function parseBundle(texts: Map<string, string>): Bundle {
  const manifest = parseJson<Manifest>(texts, 'manifest.json');
  for (const key of [
    'n_instances', 'n_classes', 'class_names', 'algorithms',
    'measure_names', 'selected_measures', 'config',
  ]) {
    if (!(key in (manifest as unknown as Record<string, unknown>))) {
      throw new BundleLoadError('manifest.json', `missing key '${key}'`);
    }
  }
  const n = manifest.n_instances;

  const coordsCsv = safeCsv(texts, 'coordinates.csv');
  expectHeader('coordinates.csv', coordsCsv.header, ['instance_id', 'z1', 'z2']);
  expectRows('coordinates.csv', coordsCsv.rows.length, n);
  const instanceIds = coordsCsv.rows.map((r, i) => {
    const id = Number(r[0]);
    if (!Number.isInteger(id)) {
      throw new BundleLoadError('coordinates.csv', `row ${i + 2}: bad instance_id '${r[0]}'`);
    }
    return id;
  });
  const coords = new Float64Array(2 * n);
  const z1 = numericColumn(coordsCsv.rows, 1);
  const z2 = numericColumn(coordsCsv.rows, 2);
  for (let i = 0; i < n; i++) {
    if (!Number.isFinite(z1[i]) || !Number.isFinite(z2[i])) {
      throw new BundleLoadError('coordinates.csv', `row ${i + 2}: non-finite coordinate`);
    }
    coords[2 * i] = z1[i];
    coords[2 * i + 1] = z2[i];
  }

  const metaCsv = safeCsv(texts, 'metadata.csv');
  const expectedMeta = [
    'instance_id',
    ...manifest.measure_names,
    ...manifest.algorithms.map((a) => `algo_${a}_logloss`),
    'instance_hardness',
    'label',
  ];
  expectHeader('metadata.csv', metaCsv.header, expectedMeta);
  expectRows('metadata.csv', metaCsv.rows.length, n);
  const metadataColumns = metaCsv.header.slice(1);
  const metadata = new Map<string, Float64Array>();
  for (let c = 1; c < metaCsv.header.length - 1; c++) {
    metadata.set(metaCsv.header[c], numericColumn(metaCsv.rows, c));
  }
  const labelCol = metaCsv.header.length - 1;
  const labels = metaCsv.rows.map((r) => r[labelCol]);
  const ihCol = metaCsv.header.indexOf('instance_hardness');
  const ihCells = metaCsv.rows.map((r) => r[ihCol]);
  metaCsv.rows.forEach((r, i) => {
    if (Number(r[0]) !== instanceIds[i]) {
      throw new BundleLoadError('metadata.csv', `row ${i + 2}: instance_id disagrees with coordinates.csv`);
    }
    const badLabel = !manifest.class_names.includes(r[labelCol]);
    if (badLabel) {
      throw new BundleLoadError('metadata.csv', `row ${i + 2}: unknown label '${r[labelCol]}'`);
    }
  });

  const rawCsv = safeCsv(texts, 'raw_records.csv');
  if (rawCsv.header[0] !== 'instance_id') {
    throw new BundleLoadError('raw_records.csv', "first column must be 'instance_id'");
  }
  expectRows('raw_records.csv', rawCsv.rows.length, n);
  rawCsv.rows.forEach((r, i) => {
    if (Number(r[0]) !== instanceIds[i]) {
      throw new BundleLoadError('raw_records.csv', `row ${i + 2}: instance_id disagrees with coordinates.csv`);
    }
  });
  const rawColumns = rawCsv.header.slice(1);
  const rawValues = new Map<string, Float64Array>();
  rawColumns.forEach((name, j) => {
    rawValues.set(name, numericColumn(rawCsv.rows, j + 1));
  });

  const footprints = parseJson<FootprintsFile>(texts, 'footprints.json');
  if (!Array.isArray(footprints.owners)) {
    throw new BundleLoadError('footprints.json', "missing 'owners' array");
  }
  const validOwners = new Set([...manifest.algorithms, 'instance_easiness']);
  for (const fp of footprints.owners) {
    if (!validOwners.has(fp.owner)) {
      throw new BundleLoadError('footprints.json', `unknown owner '${fp.owner}'`);
    }
    for (const poly of fp.polygons) {
      if (poly.length < 3) {
        throw new BundleLoadError('footprints.json', `owner '${fp.owner}': degenerate polygon`);
      }
    }
  }

  const ranking = parseJson<RankingFile>(texts, 'ranking.json');
  const aggregated = (ranking.aggregated ?? []).map((pair) => pair[0]);
  if ([...aggregated].sort().join() !== [...manifest.measure_names].sort().join()) {
    throw new BundleLoadError('ranking.json', 'aggregated ranking is not a permutation of the measures');
  }

  const model = parseJson<ModelFile>(texts, 'model.json');
  if (!Array.isArray(model.A) || model.A.length !== 2) {
    throw new BundleLoadError('model.json', "'A' must have two rows");
  }

  return {
    manifest,
    instanceIds,
    coords,
    metadataColumns,
    metadata,
    labels,
    ihCells,
    rawHeader: rawCsv.headerLine,
    rawLines: rawCsv.lines,
    rawColumns,
    rawValues,
    footprints,
    ranking,
    model,
  };
}

/** Columns offered by the color_by picker, in display order. */
export function colorableColumns(bundle: Bundle): string[] {
  const meta = bundle.metadataColumns.filter((c) => c !== 'label');
  const ordered = [
    'instance_hardness',
    ...meta.filter((c) => c !== 'instance_hardness'),
    ...bundle.rawColumns,
  ];
  return [...new Set(ordered)];
}

/** Numeric values backing one color_by column. */
export function columnValues(bundle: Bundle, column: string): Float64Array {
  const fromMeta = bundle.metadata.get(column);
  if (fromMeta !== undefined) {
    return fromMeta;
  }
  const fromRaw = bundle.rawValues.get(column);
  if (fromRaw !== undefined) {
    return fromRaw;
  }
  throw new Error(`unknown column '${column}'`);
}

/**
 * Selection export: the verbatim raw_records line of every selected
 * instance, ascending by instance_id, with the instance_hardness cell
 * appended. The record portion is the exact bytes the bundle carries.
 */
export function buildSelectionCsv(bundle: Bundle, selection: Set<number>): string {
  const rowOf = new Map<number, number>();
  bundle.instanceIds.forEach((id, row) => rowOf.set(id, row));
  const ids = [...selection].sort((a, b) => a - b);
  const out = [`${bundle.rawHeader},instance_hardness`];
  for (const id of ids) {
    const row = rowOf.get(id);
    if (row === undefined) {
      throw new Error(`selection contains unknown instance_id ${id}`);
    }
    out.push(`${bundle.rawLines[row]},${bundle.ihCells[row]}`);
  }
  return out.join('\n') + '\n';
}

function parseJson<T>(texts: Map<string, string>, name: string): T {
  try {
    return JSON.parse(texts.get(name) ?? '') as T;
  } catch (err) {
    throw new BundleLoadError(name, `invalid JSON (${(err as Error).message})`);
  }
}

function safeCsv(texts: Map<string, string>, name: string) {
  try {
    return parseCsv(texts.get(name) ?? '', name);
  } catch (err) {
    if (err instanceof CsvError) {
      throw new BundleLoadError(name, err.message);
    }
    throw err;
  }
}

function expectHeader(file: string, got: string[], want: string[]): void {
  if (got.length !== want.length || got.some((c, i) => c !== want[i])) {
    throw new BundleLoadError(file, `header mismatch: got [${got.join(', ')}]`);
  }
}

function expectRows(file: string, got: number, want: number): void {
  if (got !== want) {
    throw new BundleLoadError(file, `expected ${want} rows, found ${got}`);
  }
}
