import { SearchClient } from "./api";
import { CanvasEditor } from "./canvas";
import { typeColor } from "./palette";
import { ResultsPanel } from "./results";
import { COMPONENT_TYPES, type ComponentTypeName } from "./types";

const SERVICE_URL = import.meta.env?.VITE_SERVICE_URL ?? "http://127.0.0.1:8000";

function buildPalette(editor: CanvasEditor): HTMLElement {
  const palette = document.getElementById("palette")!;
  for (const ctype of COMPONENT_TYPES) {
    const button = document.createElement("button");
    button.className = "palette-entry";
    button.dataset.ctype = ctype;
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = typeColor(ctype);
    button.appendChild(swatch);
    button.appendChild(document.createTextNode(ctype));
    button.addEventListener("click", () => {
      const active = editor.activeType === ctype ? null : (ctype as ComponentTypeName);
      editor.activeType = active;
      palette
        .querySelectorAll(".palette-entry")
        .forEach((el) => el.classList.toggle("active", (el as HTMLElement).dataset.ctype === active));
    });
    palette.appendChild(button);
  }
  return palette;
}

function main(): void {
  const canvas = document.getElementById("sketch") as HTMLCanvasElement;
  const editor = new CanvasEditor(canvas);
  buildPalette(editor);

  const client = new SearchClient(SERVICE_URL);
  const results = new ResultsPanel(document.getElementById("results")!, client);

  const doSearch = async () => {
    try {
      // the canvas state is left untouched: sketch, search, refine, repeat
      const response = await client.search(editor.snapshot());
      results.render(response);
    } catch (err) {
      if ((err as Error).name === "AbortError") return;
      results.showError(`search failed: ${(err as Error).message}`, doSearch);
    }
  };

  document.getElementById("search")!.addEventListener("click", doSearch);
  document.getElementById("undo")!.addEventListener("click", () => editor.undo());
  document.getElementById("clear")!.addEventListener("click", () => editor.clear());
  window.addEventListener("keydown", (e) => editor.keyDown(e));

  client
    .health()
    .then((h) => {
      document.getElementById("status")!.textContent = `index: ${h.index_size} designs`;
    })
    .catch(() => {
      document.getElementById("status")!.textContent = "service unreachable";
    });
}

main();
