import type { CanvasState } from "./types";

export interface SearchRequestBody {
  extent: { width: number; height: number };
  components: { ctype: string; bounds: { left: number; top: number; right: number; bottom: number } }[];
  k: number;
  mode: string;
}

/**
 * Lossless, canonical mapping from canvas state to the service's search
 * request. Key order is fixed so identical states serialize to identical
 * bytes; coordinates are rounded to integers (the service's pixel unit).
 */
export function serializeCanvas(state: CanvasState, k = 10, mode = "Color"): SearchRequestBody {
  return {
    extent: { width: state.extent.width, height: state.extent.height },
    components: state.components.map((c) => ({
      ctype: c.ctype,
      bounds: {
        left: Math.round(c.bounds.left),
        top: Math.round(c.bounds.top),
        right: Math.round(c.bounds.right),
        bottom: Math.round(c.bounds.bottom),
      },
    })),
    k,
    mode,
  };
}

export function requestBytes(state: CanvasState, k = 10, mode = "Color"): string {
  return JSON.stringify(serializeCanvas(state, k, mode));
}
