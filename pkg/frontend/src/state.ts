import type { Bounds, CanvasState, ComponentTypeName } from "./types";

export const MIN_SIZE = 4; // logical pixels

export function createState(width = 360, height = 640): CanvasState {
  return { extent: { width, height }, components: [], selected: null };
}

export function cloneState(state: CanvasState): CanvasState {
  return {
    extent: { ...state.extent },
    components: state.components.map((c) => ({ ctype: c.ctype, bounds: { ...c.bounds } })),
    selected: state.selected,
  };
}

export function statesEqual(a: CanvasState, b: CanvasState): boolean {
  return JSON.stringify(cloneState(a)) === JSON.stringify(cloneState(b));
}

function clampBounds(b: Bounds, extent: { width: number; height: number }): Bounds {
  let left = Math.max(0, Math.min(b.left, extent.width - MIN_SIZE));
  let top = Math.max(0, Math.min(b.top, extent.height - MIN_SIZE));
  let right = Math.max(left + MIN_SIZE, Math.min(b.right, extent.width));
  let bottom = Math.max(top + MIN_SIZE, Math.min(b.bottom, extent.height));
  // a drag past the far edge pushes the origin back inside
  if (right - left < MIN_SIZE) left = right - MIN_SIZE;
  if (bottom - top < MIN_SIZE) top = bottom - MIN_SIZE;
  return { left, top, right, bottom };
}

export function placeComponent(
  state: CanvasState,
  ctype: ComponentTypeName,
  bounds: Bounds,
): CanvasState {
  const next = cloneState(state);
  next.components.push({ ctype, bounds: clampBounds(bounds, state.extent) });
  next.selected = next.components.length - 1;
  return next;
}

export function moveComponent(state: CanvasState, index: number, dx: number, dy: number): CanvasState {
  const next = cloneState(state);
  const comp = next.components[index];
  if (!comp) return next;
  const b = comp.bounds;
  const w = b.right - b.left;
  const h = b.bottom - b.top;
  let left = b.left + dx;
  let top = b.top + dy;
  left = Math.max(0, Math.min(left, state.extent.width - w));
  top = Math.max(0, Math.min(top, state.extent.height - h));
  comp.bounds = { left, top, right: left + w, bottom: top + h };
  return next;
}

export function resizeComponent(state: CanvasState, index: number, bounds: Bounds): CanvasState {
  const next = cloneState(state);
  const comp = next.components[index];
  if (!comp) return next;
  comp.bounds = clampBounds(
    {
      left: Math.min(bounds.left, bounds.right - MIN_SIZE),
      top: Math.min(bounds.top, bounds.bottom - MIN_SIZE),
      right: Math.max(bounds.right, bounds.left + MIN_SIZE),
      bottom: Math.max(bounds.bottom, bounds.top + MIN_SIZE),
    },
    state.extent,
  );
  return next;
}

export function deleteComponent(state: CanvasState, index: number): CanvasState {
  const next = cloneState(state);
  if (index < 0 || index >= next.components.length) return next;
  next.components.splice(index, 1);
  if (next.selected !== null) {
    if (next.selected === index) next.selected = null;
    else if (next.selected > index) next.selected -= 1;
  }
  return next;
}

export function selectComponent(state: CanvasState, index: number | null): CanvasState {
  const next = cloneState(state);
  next.selected = index !== null && index >= 0 && index < next.components.length ? index : null;
  return next;
}

/** Topmost (last-placed) component under the pointer. */
export function hitTest(state: CanvasState, x: number, y: number): number | null {
  for (let i = state.components.length - 1; i >= 0; i--) {
    const b = state.components[i].bounds;
    if (x >= b.left && x < b.right && y >= b.top && y < b.bottom) return i;
  }
  return null;
}

export function nudgeSelected(state: CanvasState, dx: number, dy: number, fast = false): CanvasState {
  if (state.selected === null) return cloneState(state);
  const step = fast ? 10 : 1;
  return moveComponent(state, state.selected, dx * step, dy * step);
}

/** Snapshot-stack undo history. */
export class History {
  private stack: CanvasState[] = [];
  private limit: number;

  constructor(limit = 100) {
    this.limit = limit;
  }

  push(state: CanvasState): void {
    this.stack.push(cloneState(state));
    if (this.stack.length > this.limit) this.stack.shift();
  }

  undo(): CanvasState | null {
    return this.stack.pop() ?? null;
  }

  get canUndo(): boolean {
    return this.stack.length > 0;
  }

  clear(): void {
    this.stack = [];
  }
}
