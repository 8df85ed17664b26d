export interface Bounds {
  left: number;
  top: number;
  right: number;
  bottom: number;
}

export interface PlacedComponent {
  ctype: ComponentTypeName;
  bounds: Bounds;
}

/** The 16 component types the search service accepts, by service spelling. */
export const COMPONENT_TYPES = [
  "TextView",
  "EditText",
  "Button",
  "ImageView",
  "CheckBox",
  "RadioButton",
  "Switch",
  "ToggleButton",
  "Spinner",
  "ProgressBar",
  "SeekBar",
  "RatingBar",
  "ListView",
  "WebView",
  "VideoView",
  "CheckedTextView",
] as const;

export type ComponentTypeName = (typeof COMPONENT_TYPES)[number];

export interface CanvasState {
  /** logical sketch space; the service rescales to its raster */
  extent: { width: number; height: number };
  components: PlacedComponent[];
  selected: number | null;
}

export interface SearchResult {
  screen_id: string;
  distance: number;
  rank: number;
  wireframe_url: string;
  meta_url: string;
}

export interface SearchResponse {
  results: SearchResult[];
  model_fingerprint: string;
  elapsed_ms: number;
}
