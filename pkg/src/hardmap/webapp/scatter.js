/** Scene computation and canvas painting for the embedding scatter. */
import { columnValues } from './bundle.js';
import { makeColorScale, ownerColor } from './color.js';
/**
 * Everything the painter needs, as plain data. Positions depend only on
 * the coordinates and the viewport; colors only on the colorBy column;
 * selection only flips the per-mark flag.
 */
export function computeScene(bundle, state, viewport) {
    const n = bundle.instanceIds.length;
    let minX = Infinity;
    let maxX = -Infinity;
    let minY = Infinity;
    let maxY = -Infinity;
    for (let i = 0; i < n; i++) {
        minX = Math.min(minX, bundle.coords[2 * i]);
        maxX = Math.max(maxX, bundle.coords[2 * i]);
        minY = Math.min(minY, bundle.coords[2 * i + 1]);
        maxY = Math.max(maxY, bundle.coords[2 * i + 1]);
    }
    const spanX = maxX - minX || 1;
    const spanY = maxY - minY || 1;
    const innerW = viewport.width - 2 * viewport.padding;
    const innerH = viewport.height - 2 * viewport.padding;
    const toScreen = (z1, z2) => [
        viewport.padding + ((z1 - minX) / spanX) * innerW,
        viewport.padding + (1 - (z2 - minY) / spanY) * innerH,
    ];
    const toData = (x, y) => [
        minX + ((x - viewport.padding) / innerW) * spanX,
        minY + (1 - (y - viewport.padding) / innerH) * spanY,
    ];
    const values = columnValues(bundle, state.colorBy);
    const colorScale = makeColorScale(values);
    const marks = [];
    for (let i = 0; i < n; i++) {
        const z1 = bundle.coords[2 * i];
        const z2 = bundle.coords[2 * i + 1];
        const [x, y] = toScreen(z1, z2);
        const id = bundle.instanceIds[i];
        marks.push({
            id,
            x,
            y,
            z1,
            z2,
            shape: state.markerByClass.get(bundle.labels[i]) ?? 'circle',
            fill: colorScale(values[i]),
            selected: state.selection.has(id),
        });
    }
    const ownerNames = bundle.footprints.owners.map((o) => o.owner);
    const overlays = [];
    for (const fp of bundle.footprints.owners) {
        if (!state.overlay.has(fp.owner)) {
            continue;
        }
        for (const poly of fp.polygons) {
            overlays.push({
                owner: fp.owner,
                points: poly.map(([z1, z2]) => toScreen(z1, z2)),
                fill: ownerColor(fp.owner, ownerNames),
            });
        }
    }
    return { marks, overlays, toScreen, toData, colorScale };
}
const MARK_RADIUS = 3.5;
export function paintScene(ctx, scene, viewport) {
    ctx.clearRect(0, 0, viewport.width, viewport.height);
    for (const overlay of scene.overlays) {
        ctx.beginPath();
        overlay.points.forEach(([x, y], i) => {
            if (i === 0) {
                ctx.moveTo(x, y);
            }
            else {
                ctx.lineTo(x, y);
            }
        });
        ctx.closePath();
        ctx.fillStyle = overlay.fill;
        ctx.fill();
        ctx.strokeStyle = overlay.fill;
        ctx.lineWidth = 1.5;
        ctx.stroke();
    }
    for (const mark of scene.marks) {
        ctx.beginPath();
        tracePath(ctx, mark);
        ctx.fillStyle = mark.fill;
        ctx.globalAlpha = mark.selected || scene.marks.every((m) => !m.selected) ? 0.9 : 0.25;
        ctx.fill();
        if (mark.selected) {
            ctx.globalAlpha = 1.0;
            ctx.strokeStyle = '#111';
            ctx.lineWidth = 1.2;
            ctx.stroke();
        }
    }
    ctx.globalAlpha = 1.0;
}
function tracePath(ctx, mark) {
    const r = MARK_RADIUS;
    const { x, y } = mark;
    switch (mark.shape) {
        case 'circle':
            ctx.arc(x, y, r, 0, 2 * Math.PI);
            break;
        case 'triangle':
            ctx.moveTo(x, y - 1.2 * r);
            ctx.lineTo(x - 1.1 * r, y + r);
            ctx.lineTo(x + 1.1 * r, y + r);
            ctx.closePath();
            break;
        case 'square':
            ctx.rect(x - r, y - r, 2 * r, 2 * r);
            break;
        case 'diamond':
            ctx.moveTo(x, y - 1.3 * r);
            ctx.lineTo(x + 1.3 * r, y);
            ctx.lineTo(x, y + 1.3 * r);
            ctx.lineTo(x - 1.3 * r, y);
            ctx.closePath();
            break;
    }
}
