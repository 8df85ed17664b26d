import type { SearchClient } from "./api";
import type { SearchResponse, SearchResult } from "./types";

/** Ranked thumbnail grid; clicking a card opens the wireframe + metadata. */
export class ResultsPanel {
  constructor(
    private container: HTMLElement,
    private client: SearchClient,
  ) {}

  showError(message: string, onRetry: () => void): void {
    this.container.innerHTML = "";
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.textContent = message;
    const retry = document.createElement("button");
    retry.textContent = "retry";
    retry.addEventListener("click", onRetry);
    banner.appendChild(retry);
    this.container.appendChild(banner);
  }

  render(response: SearchResponse): void {
    this.container.innerHTML = "";
    const meta = document.createElement("div");
    meta.className = "results-meta";
    meta.textContent = `${response.results.length} results in ${response.elapsed_ms.toFixed(0)} ms`;
    this.container.appendChild(meta);

    const grid = document.createElement("div");
    grid.className = "results-grid";
    for (const result of response.results) {
      grid.appendChild(this.card(result));
    }
    this.container.appendChild(grid);
  }

  private card(result: SearchResult): HTMLElement {
    const card = document.createElement("figure");
    card.className = "result-card";
    const img = document.createElement("img");
    img.src = this.client.wireframeUrl(result.wireframe_url);
    img.alt = result.screen_id;
    img.loading = "lazy";
    const caption = document.createElement("figcaption");
    caption.textContent = `#${result.rank} ${result.screen_id} (d=${result.distance.toFixed(3)})`;
    card.appendChild(img);
    card.appendChild(caption);
    card.addEventListener("click", async () => {
      const meta = await fetch(this.client.wireframeUrl(result.meta_url));
      const detail = document.getElementById("detail");
      if (detail) {
        detail.textContent = JSON.stringify(await meta.json(), null, 2);
      }
      window.open(this.client.wireframeUrl(result.wireframe_url), "_blank");
    });
    return card;
  }
}
