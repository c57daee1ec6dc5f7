/** Shared shapes for the bundle explorer. */
export const BUNDLE_FILES = [
    'manifest.json',
    'coordinates.csv',
    'metadata.csv',
    'raw_records.csv',
    'footprints.json',
    'model.json',
    'ranking.json',
];
export const MARKER_ORDER = ['circle', 'triangle', 'square', 'diamond'];
export class BundleLoadError extends Error {
    constructor(file, detail) {
        super(`${file}: ${detail}`);
        this.file = file;
    }
}
