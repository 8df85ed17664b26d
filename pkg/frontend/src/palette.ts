import { COMPONENT_TYPES, type ComponentTypeName } from "./types";

/**
 * Palette colors mirror the search space rasters: 16 evenly spaced hues at
 * full saturation and value (hue i/16 for type code i), so the sketch looks
 * like what the encoder sees.
 */
export function hsvToRgb(h: number, s: number, v: number): [number, number, number] {
  const i = Math.floor(h * 6);
  const f = h * 6 - i;
  const p = v * (1 - s);
  const q = v * (1 - f * s);
  const t = v * (1 - (1 - f) * s);
  switch (i % 6) {
    case 0:
      return [v, t, p];
    case 1:
      return [q, v, p];
    case 2:
      return [p, v, t];
    case 3:
      return [p, q, v];
    case 4:
      return [t, p, v];
    default:
      return [v, p, q];
  }
}

export function typeColor(ctype: ComponentTypeName): string {
  const code = COMPONENT_TYPES.indexOf(ctype);
  const [r, g, b] = hsvToRgb(code / 16, 1, 1);
  const to255 = (x: number) => Math.round(x * 255);
  return `rgb(${to255(r)}, ${to255(g)}, ${to255(b)})`;
}

export function typeColorTriple(ctype: ComponentTypeName): [number, number, number] {
  const code = COMPONENT_TYPES.indexOf(ctype);
  return hsvToRgb(code / 16, 1, 1);
}
