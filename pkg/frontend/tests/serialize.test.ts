import { describe, expect, it } from "vitest";

import { requestBytes, serializeCanvas } from "../src/serialize";
import { createState, placeComponent } from "../src/state";
import { COMPONENT_TYPES } from "../src/types";

describe("serializeCanvas", () => {
  it("empty state carries the extent and an empty component list", () => {
    const body = serializeCanvas(createState(360, 640));
    expect(body).toEqual({
      extent: { width: 360, height: 640 },
      components: [],
      k: 10,
      mode: "Color",
    });
  });

  it("preserves component order and integer bounds", () => {
    let s = createState();
    s = placeComponent(s, "EditText", { left: 10.4, top: 20.6, right: 99.5, bottom: 50.1 });
    s = placeComponent(s, "Button", { left: 0, top: 60, right: 80, bottom: 90 });
    const body = serializeCanvas(s);
    expect(body.components.map((c) => c.ctype)).toEqual(["EditText", "Button"]);
    const b = body.components[0].bounds;
    expect([b.left, b.top, b.right, b.bottom]).toEqual([10, 21, 100, 50]);
  });

  it("ctype spellings match the service roster exactly", () => {
    expect(COMPONENT_TYPES).toHaveLength(16);
    let s = createState();
    for (const ctype of COMPONENT_TYPES) {
      s = placeComponent(s, ctype, { left: 0, top: 0, right: 10, bottom: 10 });
    }
    const body = serializeCanvas(s);
    expect(body.components.map((c) => c.ctype)).toEqual([...COMPONENT_TYPES]);
  });

  it("replaying an edit script reproduces identical request bytes", () => {
    const script = () => {
      let s = createState(360, 640);
      s = placeComponent(s, "TextView", { left: 5, top: 5, right: 200, bottom: 40 });
      s = placeComponent(s, "ImageView", { left: 5, top: 50, right: 355, bottom: 300 });
      s = placeComponent(s, "Button", { left: 80, top: 560, right: 280, bottom: 610 });
      return requestBytes(s);
    };
    expect(script()).toBe(script());
  });

  it("respects k and mode arguments", () => {
    const body = serializeCanvas(createState(), 3, "Grey");
    expect(body.k).toBe(3);
    expect(body.mode).toBe("Grey");
  });
});
