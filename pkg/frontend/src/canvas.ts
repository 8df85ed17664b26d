import { typeColor } from "./palette";
import {
  History,
  cloneState,
  createState,
  deleteComponent,
  hitTest,
  moveComponent,
  nudgeSelected,
  placeComponent,
  resizeComponent,
  selectComponent,
} from "./state";
import type { Bounds, CanvasState, ComponentTypeName } from "./types";

const HANDLE = 8; // px, resize grab corner

type DragKind =
  | { kind: "none" }
  | { kind: "place"; ctype: ComponentTypeName; start: { x: number; y: number } }
  | { kind: "move"; index: number; last: { x: number; y: number } }
  | { kind: "resize"; index: number; anchor: { x: number; y: number } };

/** Pointer-driven wireframe editor over a 2D canvas. */
export class CanvasEditor {
  state: CanvasState;
  private history = new History();
  private drag: DragKind = { kind: "none" };
  private ghost: Bounds | null = null;
  activeType: ComponentTypeName | null = null;
  onChange: (() => void) | null = null;

  constructor(private canvas: HTMLCanvasElement) {
    this.state = createState(canvas.width, canvas.height);
    canvas.addEventListener("pointerdown", (e) => this.pointerDown(e));
    canvas.addEventListener("pointermove", (e) => this.pointerMove(e));
    canvas.addEventListener("pointerup", (e) => this.pointerUp(e));
    this.draw();
  }

  private pos(e: PointerEvent): { x: number; y: number } {
    const rect = this.canvas.getBoundingClientRect();
    return {
      x: ((e.clientX - rect.left) / rect.width) * this.state.extent.width,
      y: ((e.clientY - rect.top) / rect.height) * this.state.extent.height,
    };
  }

  private commit(next: CanvasState): void {
    this.history.push(this.state);
    this.state = next;
    this.draw();
    this.onChange?.();
  }

  private pointerDown(e: PointerEvent): void {
    this.canvas.setPointerCapture(e.pointerId);
    const p = this.pos(e);
    if (this.activeType) {
      this.drag = { kind: "place", ctype: this.activeType, start: p };
      this.ghost = { left: p.x, top: p.y, right: p.x, bottom: p.y };
      return;
    }
    const hit = hitTest(this.state, p.x, p.y);
    if (hit !== null) {
      const b = this.state.components[hit].bounds;
      const nearCorner =
        Math.abs(p.x - b.right) < HANDLE && Math.abs(p.y - b.bottom) < HANDLE;
      this.state = selectComponent(this.state, hit);
      this.drag = nearCorner
        ? { kind: "resize", index: hit, anchor: { x: b.left, y: b.top } }
        : { kind: "move", index: hit, last: p };
      this.draw();
      this.onChange?.();
    } else if (this.state.selected !== null) {
      this.state = selectComponent(this.state, null);
      this.draw();
      this.onChange?.();
    }
  }

  private pointerMove(e: PointerEvent): void {
    const p = this.pos(e);
    if (this.drag.kind === "place" && this.ghost) {
      this.ghost = {
        left: Math.min(this.drag.start.x, p.x),
        top: Math.min(this.drag.start.y, p.y),
        right: Math.max(this.drag.start.x, p.x),
        bottom: Math.max(this.drag.start.y, p.y),
      };
      this.draw();
    } else if (this.drag.kind === "move") {
      const dx = p.x - this.drag.last.x;
      const dy = p.y - this.drag.last.y;
      this.drag.last = p;
      // live move without history; the full drag is one undo step
      this.state = moveComponent(this.state, this.drag.index, dx, dy);
      this.draw();
    } else if (this.drag.kind === "resize") {
      this.state = resizeComponent(this.state, this.drag.index, {
        left: this.drag.anchor.x,
        top: this.drag.anchor.y,
        right: p.x,
        bottom: p.y,
      });
      this.draw();
    }
  }

  private pointerUp(e: PointerEvent): void {
    const p = this.pos(e);
    if (this.drag.kind === "place" && this.activeType) {
      const start = this.drag.start;
      const bounds: Bounds = {
        left: Math.min(start.x, p.x),
        top: Math.min(start.y, p.y),
        right: Math.max(start.x, p.x, start.x + 12),
        bottom: Math.max(start.y, p.y, start.y + 12),
      };
      this.ghost = null;
      this.commit(placeComponent(this.state, this.activeType, bounds));
    } else if (this.drag.kind === "move" || this.drag.kind === "resize") {
      // state already reflects the drag; record it as one history step
      this.history.push(this.state);
      this.onChange?.();
    }
    this.drag = { kind: "none" };
    this.draw();
  }

  keyDown(e: KeyboardEvent): void {
    const arrows: Record<string, [number, number]> = {
      ArrowLeft: [-1, 0],
      ArrowRight: [1, 0],
      ArrowUp: [0, -1],
      ArrowDown: [0, 1],
    };
    if (e.key in arrows && this.state.selected !== null) {
      const [dx, dy] = arrows[e.key];
      e.preventDefault();
      this.commit(nudgeSelected(this.state, dx, dy, e.shiftKey));
    } else if ((e.key === "Delete" || e.key === "Backspace") && this.state.selected !== null) {
      e.preventDefault();
      this.commit(deleteComponent(this.state, this.state.selected));
    } else if ((e.ctrlKey || e.metaKey) && e.key.toLowerCase() === "z") {
      e.preventDefault();
      this.undo();
    }
  }

  undo(): void {
    const prev = this.history.undo();
    if (prev) {
      this.state = prev;
      this.draw();
      this.onChange?.();
    }
  }

  clear(): void {
    this.commit(createState(this.state.extent.width, this.state.extent.height));
  }

  snapshot(): CanvasState {
    return cloneState(this.state);
  }

  draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.state.extent;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#ffffff";
    ctx.fillRect(0, 0, width, height);
    this.state.components.forEach((comp, i) => {
      const b = comp.bounds;
      ctx.fillStyle = typeColor(comp.ctype);
      ctx.fillRect(b.left, b.top, b.right - b.left, b.bottom - b.top);
      if (i === this.state.selected) {
        ctx.strokeStyle = "#111";
        ctx.lineWidth = 2;
        ctx.setLineDash([4, 3]);
        ctx.strokeRect(b.left - 1, b.top - 1, b.right - b.left + 2, b.bottom - b.top + 2);
        ctx.setLineDash([]);
        ctx.fillStyle = "#111";
        ctx.fillRect(b.right - HANDLE / 2, b.bottom - HANDLE / 2, HANDLE, HANDLE);
      }
    });
    if (this.ghost) {
      ctx.strokeStyle = "#666";
      ctx.setLineDash([3, 3]);
      ctx.strokeRect(
        this.ghost.left,
        this.ghost.top,
        this.ghost.right - this.ghost.left,
        this.ghost.bottom - this.ghost.top,
      );
      ctx.setLineDash([]);
    }
  }
}
