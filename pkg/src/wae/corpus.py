"""Synthetic screen generator.

Produces plausible mobile screens from a handful of layout templates so the
search engine can be trained and evaluated at desk scale. Layout parameters
are drawn from small discrete sets (shared margins, bar heights, row
pitches), mirroring how real apps converge on platform conventions, with a
per-screen geometry jitter so no two screens are pixel-twins.

All dimensions are in 1080x1920 design units and every component is at
least 108px (~36dp) on each side, the usual touch-target floor.

Determinism: every random draw goes through the package's SplitMix64
generator seeded from (seed, kind, extent), so a manifest regenerates
byte-identically on any platform.
"""

from __future__ import annotations

import hashlib
import struct
from enum import Enum

from .model import Bounds, ComponentType, UIComponent, UIScreen, sequence_hash
from .prng import SplitMix64

DEFAULT_EXTENT = (1080, 1920)

# design-space dimensions all layout constants below are expressed in
DESIGN_W = 1080.0
DESIGN_H = 1920.0
MIN_SIDE = 108  # minimum component width/height in design units


class TemplateKind(Enum):
    Form = "form"
    List = "list"
    Grid = "grid"
    NavDrawer = "navdrawer"
    Settings = "settings"
    Mixed = "mixed"


DEFAULT_MIX: dict[TemplateKind, float] = {
    TemplateKind.Form: 0.2,
    TemplateKind.List: 0.2,
    TemplateKind.Grid: 0.15,
    TemplateKind.NavDrawer: 0.1,
    TemplateKind.Settings: 0.15,
    TemplateKind.Mixed: 0.2,
}

_BAR_HEIGHTS = [144, 168, 192]
_MARGINS = [24, 48, 96]
_ROW_PITCHES = [192, 240, 288]
_FIELD_HEIGHTS = [120, 168, 216]


def _screen_rng(seed: int, kind: TemplateKind, extent: tuple[int, int]) -> SplitMix64:
    h = hashlib.blake2b(digest_size=8)
    h.update(struct.pack("<q", seed))
    h.update(kind.value.encode())
    h.update(struct.pack("<ii", extent[0], extent[1]))
    return SplitMix64(int.from_bytes(h.digest(), "little"))


class _Layout:
    """Accumulates components in 1080x1920 design units, emits scaled pixels."""

    def __init__(self, rng: SplitMix64, width: int, height: int):
        self.rng = rng
        self.width = width
        self.height = height
        self.sx = width / DESIGN_W
        self.sy = height / DESIGN_H
        self.items: list[tuple[ComponentType, int, int, int, int]] = []
        self.margin = rng.choice(_MARGINS)
        self.cursor_y = 0.0  # design units
        # per-screen geometry jitter; the 12px quantum keeps any two screens
        # that drew different values apart by more than typical matching
        # thresholds, so no screen is a pixel-twin of another
        self.jitter_x = rng.choice([0, 12, 24, 36])
        self.jitter_y = rng.choice([0, 12, 24, 36, 48, 60])
        self.trim_w = rng.choice([0, 12, 24, 36])
        self.trim_h = rng.choice([0, 12, 24])

    def add(self, ctype: ComponentType, left: float, top: float, right: float, bottom: float):
        left = left + self.jitter_x
        top = top + self.jitter_y
        right = max(right + self.jitter_x - self.trim_w, left + MIN_SIDE)
        bottom = max(bottom + self.jitter_y - self.trim_h, top + MIN_SIDE)
        l = int(round(left * self.sx))
        t = int(round(top * self.sy))
        r = int(round(right * self.sx))
        b = int(round(bottom * self.sy))
        l = max(0, min(l, self.width - 1))
        t = max(0, min(t, self.height - 1))
        r = max(l + 1, min(r, self.width))
        b = max(t + 1, min(b, self.height))
        self.items.append((ctype, l, t, r, b))

    def top_bar(self):
        hb = self.rng.choice(_BAR_HEIGHTS)
        style = self.rng.randint(0, 2)
        if style == 0:
            self.add(ComponentType.TextView, 0, 0, DESIGN_W, hb)
        elif style == 1:
            self.add(ComponentType.Button, 24, 12, hb + 12, hb - 12)
            self.add(ComponentType.TextView, hb + 48, 0, DESIGN_W - hb, hb)
        else:
            self.add(ComponentType.TextView, self.margin, 0, DESIGN_W - hb - 48, hb)
            self.add(ComponentType.Button, DESIGN_W - hb + 12, 12, DESIGN_W - 24, hb - 12)
        self.cursor_y = hb + self.rng.choice([24, 48])

    def remaining(self) -> float:
        return DESIGN_H - self.cursor_y

    def bottom_tabs(self):
        """Bottom tab bar; also the fallback that keeps screens non-trivial."""
        n = self.rng.choice([3, 4])
        th = self.rng.choice([132, 168])
        tw = DESIGN_W / n
        for i in range(n):
            self.add(ComponentType.Button, i * tw + 24, DESIGN_H - th, (i + 1) * tw - 24, DESIGN_H - 24)

    def build(self, screen_id: str, app_id=None, category=None) -> UIScreen:
        seen: set[tuple[int, int, int, int]] = set()
        comps = []
        for ctype, l, t, r, b in self.items[:28]:
            while (l, t, r, b) in seen and r - l > 1:
                r -= 1
            seen.add((l, t, r, b))
            comps.append(UIComponent(ctype, Bounds(l, t, r, b)))
        return UIScreen(
            id=screen_id,
            width=self.width,
            height=self.height,
            components=tuple(comps),
            app_id=app_id,
            category=category,
        )


def _gen_form(ly: _Layout):
    rng = ly.rng
    ly.top_bar()
    m = ly.margin
    # headline
    ly.add(ComponentType.TextView, m, ly.cursor_y, DESIGN_W * rng.uniform(0.45, 0.7), ly.cursor_y + 120)
    ly.cursor_y += 120 + rng.choice([48, 96])
    fh = rng.choice(_FIELD_HEIGHTS)
    gap = rng.choice([36, 60])
    n_fields = rng.randint(3, 5)
    labelled = rng.random() < 0.4
    for _ in range(n_fields):
        if ly.remaining() < fh + 420:
            break
        if labelled:
            ly.add(ComponentType.TextView, m, ly.cursor_y, m + 360, ly.cursor_y + 108)
            ly.cursor_y += 120
        ly.add(ComponentType.EditText, m, ly.cursor_y, DESIGN_W - m, ly.cursor_y + fh)
        ly.cursor_y += fh + gap
    if rng.random() < 0.5:
        # terms checkbox row
        ly.add(ComponentType.CheckBox, m, ly.cursor_y, m + 120, ly.cursor_y + 120)
        ly.add(ComponentType.TextView, m + 144, ly.cursor_y, DESIGN_W - m, ly.cursor_y + 120)
        ly.cursor_y += 120 + gap
    elif rng.random() < 0.4:
        # radio pair (e.g. account type choice)
        half = DESIGN_W / 2
        ly.add(ComponentType.RadioButton, m, ly.cursor_y, m + 120, ly.cursor_y + 120)
        ly.add(ComponentType.TextView, m + 144, ly.cursor_y, half - 24, ly.cursor_y + 120)
        ly.add(ComponentType.RadioButton, half + 24, ly.cursor_y, half + 144, ly.cursor_y + 120)
        ly.add(ComponentType.TextView, half + 168, ly.cursor_y, DESIGN_W - m, ly.cursor_y + 120)
        ly.cursor_y += 120 + gap
    bh = rng.choice([132, 156, 180])
    bw = rng.choice([DESIGN_W - 2 * m, DESIGN_W * 0.6, DESIGN_W * 0.45])
    bx = (DESIGN_W - bw) / 2 if rng.random() < 0.7 else DESIGN_W - m - bw
    ly.add(ComponentType.Button, bx, ly.cursor_y + 24, bx + bw, ly.cursor_y + 24 + bh)
    ly.cursor_y += bh + 96
    if rng.random() < 0.3 and ly.remaining() > 240:
        ly.add(ComponentType.TextView, DESIGN_W * 0.25, ly.cursor_y, DESIGN_W * 0.75, ly.cursor_y + 108)


def _gen_list(ly: _Layout):
    rng = ly.rng
    ly.top_bar()
    m = ly.margin
    pitch = rng.choice(_ROW_PITCHES)
    row_h = pitch - rng.choice([24, 48])
    accessory = rng.choice([None, None, ComponentType.CheckBox, ComponentType.Switch, ComponentType.CheckedTextView])
    two_line = row_h >= 240 and rng.random() < 0.5
    per_row = 1 + (2 if two_line else 1) + (1 if accessory else 0)
    n_rows = min(rng.randint(4, 8), 26 // per_row)
    for _ in range(n_rows):
        if ly.remaining() < pitch + 48:
            break
        y = ly.cursor_y
        thumb = row_h
        ly.add(ComponentType.ImageView, m, y, m + thumb, y + row_h)
        text_right = DESIGN_W - m - (168 if accessory else 0)
        if two_line:
            ly.add(ComponentType.TextView, m + thumb + 36, y, text_right, y + row_h * 0.5)
            ly.add(ComponentType.TextView, m + thumb + 36, y + row_h * 0.55, text_right, y + row_h)
        else:
            ly.add(ComponentType.TextView, m + thumb + 36, y + 6, text_right, y + row_h - 6)
        if accessory is not None:
            ay = y + row_h / 2 - 60
            ly.add(accessory, DESIGN_W - m - 132, ay, DESIGN_W - m, ay + 120)
        ly.cursor_y += pitch


def _gen_grid(ly: _Layout):
    rng = ly.rng
    ly.top_bar()
    m = ly.margin
    cols = rng.choice([2, 3])
    rows = rng.choice([2, 3, 4])
    gap = rng.choice([24, 48])
    cell_w = (DESIGN_W - 2 * m - (cols - 1) * gap) / cols
    cell_h = cell_w * rng.choice([1.0, 1.2])
    caption_h = 108
    for r in range(rows):
        y = ly.cursor_y + r * (cell_h + caption_h + gap)
        if y + cell_h + caption_h > DESIGN_H - 48:
            break
        for c in range(cols):
            x = m + c * (cell_w + gap)
            ly.add(ComponentType.ImageView, x, y, x + cell_w, y + cell_h)
            ly.add(ComponentType.TextView, x, y + cell_h, x + cell_w, y + cell_h + caption_h)


def _gen_navdrawer(ly: _Layout):
    rng = ly.rng
    pw = rng.choice([696, 768, 840])
    header_h = rng.choice([240, 312])
    ly.add(ComponentType.ImageView, 0, 0, pw, header_h)
    y = header_h + rng.choice([36, 72])
    pitch = rng.choice([156, 180])
    n_rows = rng.randint(6, 9)
    for _ in range(n_rows):
        if y + pitch > DESIGN_H - 240:
            break
        ly.add(ComponentType.ImageView, 48, y, 156, y + 108)
        ly.add(ComponentType.TextView, 192, y, pw - 48, y + pitch - 36)
        y += pitch
    if rng.random() < 0.5:
        ly.add(ComponentType.Switch, pw - 192, DESIGN_H - 168, pw - 48, DESIGN_H - 60)
        ly.add(ComponentType.TextView, 48, DESIGN_H - 168, pw - 240, DESIGN_H - 60)
    if rng.random() < 0.6:
        # sliver of content visible next to the drawer
        ly.add(ComponentType.Button, pw + 48, 24, pw + 180, 156)


def _gen_settings(ly: _Layout):
    rng = ly.rng
    ly.top_bar()
    m = ly.margin
    pitch = rng.choice([168, 192, 240])
    n_rows = rng.randint(4, 8)
    for _ in range(n_rows):
        if ly.remaining() < pitch + 48:
            break
        y = ly.cursor_y
        kind = rng.random()
        if kind < 0.1:
            # slider row (e.g. brightness), label left and track right
            ly.add(ComponentType.TextView, m, y + 12, DESIGN_W * 0.42, y + 132)
            ly.add(ComponentType.SeekBar, DESIGN_W * 0.46, y + 12, DESIGN_W - m, y + 132)
        else:
            ly.add(ComponentType.TextView, m, y + 12, DESIGN_W * 0.6, y + pitch - 24)
            ay = y + pitch / 2 - 60
            if kind < 0.65:
                ly.add(ComponentType.Switch, DESIGN_W - m - 156, ay, DESIGN_W - m, ay + 108)
            elif kind < 0.8:
                ly.add(ComponentType.CheckBox, DESIGN_W - m - 120, ay, DESIGN_W - m, ay + 120)
            elif kind < 0.9:
                ly.add(ComponentType.Spinner, DESIGN_W - m - 312, ay, DESIGN_W - m, ay + 120)
            else:
                ly.add(ComponentType.ToggleButton, DESIGN_W - m - 192, ay, DESIGN_W - m, ay + 120)
        ly.cursor_y += pitch


def _gen_mixed(ly: _Layout):
    rng = ly.rng
    ly.top_bar()
    m = ly.margin
    if rng.random() < 0.6:
        hero_h = rng.choice([336, 432])
        hero = rng.choice([ComponentType.ImageView, ComponentType.VideoView, ComponentType.ImageView])
        ly.add(hero, 0, ly.cursor_y, DESIGN_W, ly.cursor_y + hero_h)
        ly.cursor_y += hero_h + 48
    if rng.random() < 0.3:
        ly.add(ComponentType.ProgressBar, m, ly.cursor_y, DESIGN_W - m, ly.cursor_y + 108)
        ly.cursor_y += 156
    if rng.random() < 0.25:
        ly.add(ComponentType.RatingBar, m, ly.cursor_y, m + 480, ly.cursor_y + 120)
        ly.add(ComponentType.TextView, m + 528, ly.cursor_y, DESIGN_W - m, ly.cursor_y + 120)
        ly.cursor_y += 168
    if rng.random() < 0.25 and ly.remaining() > 700:
        ly.add(ComponentType.ListView, m, ly.cursor_y, DESIGN_W - m, ly.cursor_y + 384)
        ly.cursor_y += 432
    n_rows = rng.randint(2, 4)
    pitch = rng.choice([192, 240, 288])
    for _ in range(n_rows):
        if ly.remaining() < pitch + 300:
            break
        y = ly.cursor_y
        ly.add(ComponentType.ImageView, m, y, m + pitch - 48, y + pitch - 48)
        ly.add(ComponentType.TextView, m + pitch, y + 12, DESIGN_W - m, y + pitch - 60)
        ly.cursor_y += pitch
    if rng.random() < 0.4 and ly.remaining() > 400:
        ly.add(ComponentType.Spinner, m, ly.cursor_y, DESIGN_W * 0.5, ly.cursor_y + 120)
        ly.add(ComponentType.Button, DESIGN_W * 0.55, ly.cursor_y, DESIGN_W - m, ly.cursor_y + 120)
        ly.cursor_y += 168
    if rng.random() < 0.35:
        # advertisement strip pinned to the bottom
        ly.add(ComponentType.WebView, 0, DESIGN_H - 168, DESIGN_W, DESIGN_H - 24)


_GENERATORS = {
    TemplateKind.Form: _gen_form,
    TemplateKind.List: _gen_list,
    TemplateKind.Grid: _gen_grid,
    TemplateKind.NavDrawer: _gen_navdrawer,
    TemplateKind.Settings: _gen_settings,
    TemplateKind.Mixed: _gen_mixed,
}


def _pad_for_removal_bands(ly: _Layout) -> None:
    """Keep every area band reachable by some component subset.

    A screen dominated by one or two large blocks can have no subset whose
    area lands in a removal band; small footer links fill the gaps in the
    achievable subset sums. Checked with the same greedy search the removal
    treatment uses.
    """
    from .treatments import REMOVAL_BANDS, RemovalInfeasibleError, remove_components

    y = DESIGN_H - 276
    x = ly.margin
    for _ in range(4):
        if len(ly.items) >= 28:
            return
        probe = ly.build("probe")
        try:
            # demand quick greedy success under several probe seeds, so a
            # 64-shuffle search under any treatment seed succeeds w.h.p.
            for band in REMOVAL_BANDS:
                for probe_seed in (0, 1, 2):
                    remove_components(probe, band, seed=probe_seed, max_reshuffles=8)
            return
        except RemovalInfeasibleError:
            pass
        for _ in range(2):
            ly.add(ComponentType.TextView, x, y, x + 360, y + 108)
            x += 396


def generate_screen(
    seed: int,
    kind: TemplateKind,
    extent: tuple[int, int] = DEFAULT_EXTENT,
    screen_id: str | None = None,
) -> UIScreen:
    """Deterministic screen for (seed, kind, extent)."""
    w, h = extent
    if w <= 0 or h <= 0:
        raise ValueError("extent must be positive")
    rng = _screen_rng(seed, kind, extent)
    ly = _Layout(rng, w, h)
    _GENERATORS[kind](ly)
    if len(ly.items) < 5:
        ly.bottom_tabs()
    _pad_for_removal_bands(ly)
    sid = screen_id if screen_id is not None else f"syn-{seed}-{kind.value}"
    return ly.build(sid, app_id=f"app-{seed & 0xFFFF}", category=kind.value)


def generate_corpus(
    seed: int,
    n: int,
    mix: dict[TemplateKind, float] | None = None,
    extent: tuple[int, int] = DEFAULT_EXTENT,
) -> list[UIScreen]:
    """n unique screens with ids "syn-<seed>-<i>", kinds drawn from mix."""
    if n < 0:
        raise ValueError("n must be >= 0")
    weights = dict(DEFAULT_MIX if mix is None else mix)
    total = sum(weights.values())
    if total <= 0:
        raise ValueError("mix weights must sum to a positive value")
    kinds = list(weights.keys())
    cumulative = []
    acc = 0.0
    for k in kinds:
        acc += weights[k] / total
        cumulative.append(acc)

    picker = SplitMix64(seed)
    screens: list[UIScreen] = []
    seen_hashes: set[int] = set()
    for i in range(n):
        u = picker.random()
        kind = kinds[-1]
        for k, edge in zip(kinds, cumulative):
            if u < edge:
                kind = k
                break
        # bump the sub-seed until the screen is new under sequence_hash
        salt = 0
        while True:
            sub_seed = (seed * 1_000_003 + i * 65_537 + salt) & ((1 << 64) - 1)
            screen = generate_screen(sub_seed, kind, extent, screen_id=f"syn-{seed}-{i}")
            digest = sequence_hash(screen)
            if digest not in seen_hashes:
                seen_hashes.add(digest)
                screens.append(screen)
                break
            salt += 1
    return screens
