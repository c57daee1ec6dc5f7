/** Small strict CSV reader for the machine-written bundle files. */
/**
 * Split one CSV line into cells. Handles RFC-style double-quoted cells so
 * raw records that carry commas survive display; the exporter never uses
 * this (it passes verbatim lines through).
 */
export function splitLine(line) {
    const cells = [];
    let cur = '';
    let quoted = false;
    for (let i = 0; i < line.length; i++) {
        const ch = line[i];
        if (quoted) {
            if (ch === '"') {
                if (line[i + 1] === '"') {
                    cur += '"';
                    i++;
                }
                else {
                    quoted = false;
                }
            }
            else {
                cur += ch;
            }
        }
        else if (ch === '"' && cur === '') {
            quoted = true;
        }
        else if (ch === ',') {
            cells.push(cur);
            cur = '';
        }
        else {
            cur += ch;
        }
    }
    cells.push(cur);
    return cells;
}
/**
 * Parse a whole CSV file. Trailing newline is expected (the writer always
 * emits one); every row must have exactly the header's cell count.
 */
export function parseCsv(text, file) {
    const rawLines = text.split('\n');
    if (rawLines.length > 0 && rawLines[rawLines.length - 1] === '') {
        rawLines.pop();
    }
    if (rawLines.length === 0) {
        throw new CsvError(file, 'file is empty');
    }
    const headerLine = stripCr(rawLines[0]);
    const header = splitLine(headerLine);
    const rows = [];
    const lines = [];
    for (let i = 1; i < rawLines.length; i++) {
        const line = stripCr(rawLines[i]);
        const cells = splitLine(line);
        if (cells.length !== header.length) {
            throw new CsvError(file, `row ${i + 1} has ${cells.length} cells, expected ${header.length}`);
        }
        rows.push(cells);
        lines.push(line);
    }
    return { header, headerLine, rows, lines };
}
export function numericColumn(rows, col) {
    const out = new Float64Array(rows.length);
    for (let i = 0; i < rows.length; i++) {
        const cell = rows[i][col];
        out[i] = cell === '' ? NaN : Number(cell);
    }
    return out;
}
export class CsvError extends Error {
    constructor(file, detail) {
        super(detail);
        this.file = file;
    }
}
function stripCr(line) {
    return line.endsWith('\r') ? line.slice(0, -1) : line;
}
