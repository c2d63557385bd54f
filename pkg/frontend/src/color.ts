/** Deterministic value formatting and red->green color coding for
 * inspect overlays.  The shade depends only on the server's color
 * scalar, so identical payloads always render identically. */

const RED: [number, number, number] = [214, 69, 65];
const GREEN: [number, number, number] = [38, 166, 91];

function lerp(a: number, b: number, t: number): number {
  return Math.round(a + (b - a) * t);
}

/** Map a color scalar in [0, 1] to a CSS rgb() string (0 red, 1 green). */
export function valueShade(color: number): string {
  const t = Math.min(1, Math.max(0, color));
  const r = lerp(RED[0], GREEN[0], t);
  const g = lerp(RED[1], GREEN[1], t);
  const b = lerp(RED[2], GREEN[2], t);
  return `rgb(${r},${g},${b})`;
}

/** Overlay number: the raw agent value to 2 decimals. */
export function formatValue(value: number): string {
  return value.toFixed(2);
}
