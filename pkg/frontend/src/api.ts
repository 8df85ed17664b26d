import { requestBytes } from "./serialize";
import type { CanvasState, SearchResponse } from "./types";

/**
 * Search client; at most one request in flight, a new search cancels the
 * previous one.
 */
export class SearchClient {
  readonly baseUrl: string;
  private controller: AbortController | null = null;

  constructor(baseUrl = "") {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  async search(state: CanvasState, k = 10, mode = "Color"): Promise<SearchResponse> {
    this.controller?.abort();
    this.controller = new AbortController();
    const response = await fetch(`${this.baseUrl}/api/search`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: requestBytes(state, k, mode),
      signal: this.controller.signal,
    });
    if (!response.ok) {
      const detail = await response.text();
      throw new Error(`search failed (${response.status}): ${detail}`);
    }
    return (await response.json()) as SearchResponse;
  }

  wireframeUrl(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async health(): Promise<{ status: string; index_size: number }> {
    const response = await fetch(`${this.baseUrl}/api/health`);
    if (!response.ok) throw new Error(`health failed (${response.status})`);
    return (await response.json()) as { status: string; index_size: number };
  }
}
