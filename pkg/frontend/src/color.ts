/** Continuous red-high / blue-low color scale over one column. */

export interface ColorScale {
  (value: number): string;
  min: number;
  max: number;
}

const MISSING = '#9e9e9e';

/**
 * Pure function of the column's values: the domain is [min, max] of the
 * finite entries, hue runs 240 (blue, low) down to 0 (red, high).
 */
export function makeColorScale(values: Float64Array): ColorScale {
  let min = Infinity;
  let max = -Infinity;
  for (let i = 0; i < values.length; i++) {
    const v = values[i];
    if (Number.isFinite(v)) {
      min = Math.min(min, v);
      max = Math.max(max, v);
    }
  }
  const span = max - min;
  const scale = ((value: number): string => {
    if (!Number.isFinite(value)) {
      return MISSING;
    }
    const t = span > 0 ? (value - min) / span : 0.5;
    const hue = 240 * (1 - Math.min(1, Math.max(0, t)));
    return `hsl(${hue.toFixed(1)}, 85%, 48%)`;
  }) as ColorScale;
  scale.min = min;
  scale.max = max;
  return scale;
}

/** Fixed overlay color per footprint owner, stable across renders. */
export function ownerColor(owner: string, owners: string[]): string {
  const idx = Math.max(0, owners.indexOf(owner));
  const hue = (idx * 137.508) % 360;
  return `hsla(${hue.toFixed(1)}, 70%, 45%, 0.25)`;
}
