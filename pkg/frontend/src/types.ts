/** Shared shapes for the bundle explorer. */

export const BUNDLE_FILES = [
  'manifest.json',
  'coordinates.csv',
  'metadata.csv',
  'raw_records.csv',
  'footprints.json',
  'model.json',
  'ranking.json',
] as const;

export type BundleFileName = (typeof BUNDLE_FILES)[number];

/** Fetches one bundle file by name; rejects on transport failure. */
export type Fetcher = (name: BundleFileName) => Promise<string>;

export interface Manifest {
  tool: string;
  version: string;
  created: string;
  seed: number;
  n_instances: number;
  n_classes: number;
  class_names: string[];
  algorithms: string[];
  selected_measures: string[];
  measure_names: string[];
  config: Record<string, unknown>;
}

export interface FootprintRegion {
  owner: string;
  polygons: number[][][];
  area: number;
  density: number;
  purity: number;
  n_inside: number;
  n_good_inside: number;
}

export interface FootprintsFile {
  tau_good: number;
  easiness_threshold: number;
  purity_floor: number;
  owners: FootprintRegion[];
}

export interface RankingFile {
  per_algorithm: Record<string, [string, number][]>;
  aggregated: [string, number][];
}

export interface ModelFile {
  A: number[][];
  B: number[][];
  C: number[][];
  R: number[][];
  selected_measures: string[];
  scaling_stats: Record<string, Record<string, number[]>>;
  objective: number;
  restarts_log: number[];
}

/**
 * Everything the UI needs, parsed once after all seven files validate.
 * Numeric columns are parsed eagerly; the verbatim CSV lines are kept so
 * exports can pass records through untouched.
 */
export interface Bundle {
  manifest: Manifest;
  instanceIds: number[];
  /** z1/z2 per instance, same order as instanceIds. */
  coords: Float64Array;
  /** metadata.csv column names (without instance_id). */
  metadataColumns: string[];
  /** column name -> numeric values per instance (NaN where not a number). */
  metadata: Map<string, Float64Array>;
  /** class label string per instance. */
  labels: string[];
  /** exact instance_hardness cell text per instance, for byte-stable export. */
  ihCells: string[];
  /** raw_records.csv header line, verbatim. */
  rawHeader: string;
  /** raw_records.csv data lines, verbatim, indexed by row order. */
  rawLines: string[];
  /** raw feature column names (from raw_records.csv, without instance_id). */
  rawColumns: string[];
  /** raw column name -> parsed numeric values (NaN for non-numeric cells). */
  rawValues: Map<string, Float64Array>;
  footprints: FootprintsFile;
  ranking: RankingFile;
  model: ModelFile;
}

/** What the user is looking at; every field validated against the bundle. */
export interface ViewState {
  colorBy: string;
  overlay: Set<string>;
  selection: Set<number>;
  markerByClass: Map<string, MarkerShape>;
}

export type MarkerShape = 'circle' | 'triangle' | 'square' | 'diamond';

export const MARKER_ORDER: MarkerShape[] = ['circle', 'triangle', 'square', 'diamond'];

export class BundleLoadError extends Error {
  readonly file: string;

  constructor(file: string, detail: string) {
    super(`${file}: ${detail}`);
    this.file = file;
  }
}
