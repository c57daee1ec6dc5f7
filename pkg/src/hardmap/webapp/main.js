/** DOM wiring: load the bundle, render, and route interactions. */
import { buildSelectionCsv, colorableColumns, httpFetcher, droppedFilesFetcher, loadBundle } from './bundle.js';
import { computeScene, paintScene } from './scatter.js';
import { decodeFragment, encodeFragment, selectFootprint, selectLasso, selectRect, summarizeSelection, withColorBy, withOverlayToggled, withSelection, } from './state.js';
import { BundleLoadError, BUNDLE_FILES } from './types.js';
const viewport = { width: 760, height: 560, padding: 24 };
let bundle = null;
let state = null;
let scene = null;
let lassoMode = false;
let dragStart = null;
let lassoPoints = [];
const $ = (id) => document.getElementById(id);
async function boot() {
    const status = $('status');
    try {
        bundle = await loadBundle(httpFetcher(''));
    }
    catch (err) {
        const detail = err instanceof BundleLoadError ? err.message : String(err);
        status.textContent = `no bundle at this origin (${detail}) — drop the seven bundle files here instead`;
        wireFileDrop();
        return;
    }
    start();
}
function wireFileDrop() {
    const dropped = new Map();
    document.body.addEventListener('dragover', (ev) => ev.preventDefault());
    document.body.addEventListener('drop', async (ev) => {
        ev.preventDefault();
        for (const file of Array.from(ev.dataTransfer?.files ?? [])) {
            dropped.set(file.name, await file.text());
        }
        const missing = BUNDLE_FILES.filter((name) => !dropped.has(name));
        if (missing.length > 0) {
            $('status').textContent = `still missing: ${missing.join(', ')}`;
            return;
        }
        try {
            bundle = await loadBundle(droppedFilesFetcher(dropped));
        }
        catch (err) {
            $('status').textContent = err instanceof Error ? err.message : String(err);
            return;
        }
        start();
    });
}
function start() {
    if (bundle === null) {
        return;
    }
    state = decodeFragment(bundle, window.location.hash);
    $('status').textContent =
        `${bundle.manifest.n_instances} instances, ${bundle.manifest.algorithms.length} algorithms, ` +
            `seed ${bundle.manifest.seed}`;
    buildControls();
    window.addEventListener('hashchange', () => {
        if (bundle !== null) {
            state = decodeFragment(bundle, window.location.hash);
            syncControls();
            redraw();
        }
    });
    wireCanvas();
    $('export').addEventListener('click', exportSelection);
    $('clear').addEventListener('click', () => {
        update({ ...state, selection: new Set() });
    });
    $('lasso-toggle').addEventListener('change', (ev) => {
        lassoMode = ev.target.checked;
    });
    redraw();
}
function buildControls() {
    const colorSel = $('color-by');
    colorSel.innerHTML = '';
    for (const column of colorableColumns(bundle)) {
        const opt = document.createElement('option');
        opt.value = column;
        opt.textContent = column;
        colorSel.appendChild(opt);
    }
    colorSel.addEventListener('change', () => {
        update(withColorBy(bundle, state, colorSel.value));
    });
    const overlayBox = $('overlays');
    overlayBox.innerHTML = '';
    for (const fp of bundle.footprints.owners) {
        const label = document.createElement('label');
        const cb = document.createElement('input');
        cb.type = 'checkbox';
        cb.dataset.owner = fp.owner;
        cb.addEventListener('change', () => update(withOverlayToggled(state, fp.owner)));
        const pick = document.createElement('button');
        pick.textContent = 'select';
        pick.title = 'select the instances inside this footprint';
        pick.addEventListener('click', () => {
            update(withSelection(bundle, state, selectFootprint(bundle, fp.owner)));
        });
        label.appendChild(cb);
        label.appendChild(document.createTextNode(` ${fp.owner}  (area ${fp.area.toFixed(3)}, density ${fp.density.toFixed(2)}, purity ${fp.purity.toFixed(2)}) `));
        label.appendChild(pick);
        overlayBox.appendChild(label);
    }
    syncControls();
}
function syncControls() {
    const colorSel = $('color-by');
    colorSel.value = state.colorBy;
    for (const cb of Array.from($('overlays').querySelectorAll('input[type=checkbox]'))) {
        const input = cb;
        input.checked = state.overlay.has(input.dataset.owner ?? '');
    }
}
function wireCanvas() {
    const canvas = $('plot');
    canvas.width = viewport.width;
    canvas.height = viewport.height;
    const pos = (ev) => {
        const box = canvas.getBoundingClientRect();
        return [ev.clientX - box.left, ev.clientY - box.top];
    };
    canvas.addEventListener('pointerdown', (ev) => {
        const p = pos(ev);
        if (lassoMode) {
            lassoPoints.push(scene.toData(p[0], p[1]));
            redraw();
        }
        else {
            dragStart = p;
        }
    });
    canvas.addEventListener('pointerup', (ev) => {
        if (lassoMode || dragStart === null) {
            return;
        }
        const [x0, y0] = dragStart;
        const [x1, y1] = pos(ev);
        dragStart = null;
        const a = scene.toData(x0, y0);
        const b = scene.toData(x1, y1);
        const rect = { x0: a[0], y0: a[1], x1: b[0], y1: b[1] };
        update(withSelection(bundle, state, selectRect(bundle, rect)));
    });
    canvas.addEventListener('dblclick', () => {
        if (lassoMode && lassoPoints.length >= 3) {
            update(withSelection(bundle, state, selectLasso(bundle, lassoPoints)));
        }
        lassoPoints = [];
    });
}
function update(next) {
    state = next;
    const fragment = encodeFragment(state);
    if (window.location.hash !== fragment) {
        history.replaceState(null, '', fragment === '' ? '#' : fragment);
    }
    syncControls();
    redraw();
}
function redraw() {
    scene = computeScene(bundle, state, viewport);
    const canvas = $('plot');
    const ctx = canvas.getContext('2d');
    paintScene(ctx, scene, viewport);
    if (lassoPoints.length > 0) {
        ctx.beginPath();
        lassoPoints.forEach(([z1, z2], i) => {
            const [x, y] = scene.toScreen(z1, z2);
            if (i === 0) {
                ctx.moveTo(x, y);
            }
            else {
                ctx.lineTo(x, y);
            }
        });
        ctx.strokeStyle = '#555';
        ctx.setLineDash([4, 3]);
        ctx.stroke();
        ctx.setLineDash([]);
    }
    renderLegend();
    renderSummary();
    renderRecords();
}
function renderLegend() {
    const legend = $('legend');
    const lo = scene.colorScale.min;
    const hi = scene.colorScale.max;
    legend.textContent = `${state.colorBy}: blue ${Number.isFinite(lo) ? lo.toPrecision(4) : '—'}`
        + ` … red ${Number.isFinite(hi) ? hi.toPrecision(4) : '—'}`;
    const shapes = [...state.markerByClass.entries()]
        .map(([cls, shape]) => `${cls}: ${shape}`)
        .join(',  ');
    $('shapes').textContent = shapes;
}
function renderSummary() {
    const table = $('summary');
    const rows = summarizeSelection(bundle, state.selection);
    const fmt = (v) => (Number.isFinite(v) ? v.toFixed(4) : '—');
    table.innerHTML =
        '<tr><th>measure</th><th>selection mean</th><th>global mean</th></tr>' +
            rows
                .map((r) => `<tr><td>${r.measure}</td><td>${fmt(r.selectionMean)}</td><td>${fmt(r.globalMean)}</td></tr>`)
                .join('');
    $('selection-count').textContent = `${state.selection.size} selected`;
    $('export').disabled = state.selection.size === 0;
}
function renderRecords() {
    const table = $('records');
    const ids = [...state.selection].sort((a, b) => a - b).slice(0, 200);
    const rowOf = new Map();
    bundle.instanceIds.forEach((id, row) => rowOf.set(id, row));
    const esc = (s) => s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
    const header = ['instance_id', ...bundle.rawColumns, 'IH'];
    table.innerHTML =
        `<tr>${header.map((h) => `<th>${esc(h)}</th>`).join('')}</tr>` +
            ids
                .map((id) => {
                const row = rowOf.get(id);
                const cells = bundle.rawLines[row].split(',');
                return `<tr>${cells.map((c) => `<td>${esc(c)}</td>`).join('')}<td>${Number(bundle.ihCells[row]).toFixed(4)}</td></tr>`;
            })
                .join('');
}
function exportSelection() {
    if (state.selection.size === 0) {
        return;
    }
    const body = buildSelectionCsv(bundle, state.selection);
    const blob = new Blob([body], { type: 'text/csv' });
    const a = document.createElement('a');
    a.href = URL.createObjectURL(blob);
    a.download = 'selection.csv';
    a.click();
    URL.revokeObjectURL(a.href);
}
boot();
