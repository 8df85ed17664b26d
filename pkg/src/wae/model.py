"""Core domain types: component roster, bounds, screens.

Every other module consumes these types. Screens are immutable value
objects; bounds are half-open pixel rectangles [left, right) x [top, bottom)
so that width * height arithmetic is unambiguous.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator


class ComponentType(Enum):
    """The 16 UI control components kept after merge/drop rules.

    MultiAutoCompleteTextView and ImageButton are merged away at ingestion
    (into EditText and Button); CalendarView/TimePicker/DatePicker are
    dropped. Codes are stable and used for palettes and hashing.
    """

    TextView = 0
    EditText = 1
    Button = 2
    ImageView = 3
    CheckBox = 4
    RadioButton = 5
    Switch = 6
    ToggleButton = 7
    Spinner = 8
    ProgressBar = 9
    SeekBar = 10
    RatingBar = 11
    ListView = 12
    WebView = 13
    VideoView = 14
    CheckedTextView = 15

    @property
    def code(self) -> int:
        return self.value


ROSTER: tuple[ComponentType, ...] = tuple(ComponentType)

TEXT_TYPES = frozenset(
    {ComponentType.TextView, ComponentType.EditText, ComponentType.CheckedTextView}
)


@dataclass(frozen=True, order=True)
class Bounds:
    """Half-open pixel rectangle [left, right) x [top, bottom)."""

    left: int
    top: int
    right: int
    bottom: int

    @property
    def width(self) -> int:
        return self.right - self.left

    @property
    def height(self) -> int:
        return self.bottom - self.top

    @property
    def area(self) -> int:
        return self.width * self.height

    def is_degenerate(self) -> bool:
        return self.left >= self.right or self.top >= self.bottom

    def contains(self, other: "Bounds") -> bool:
        return (
            self.left <= other.left
            and self.top <= other.top
            and other.right <= self.right
            and other.bottom <= self.bottom
        )


@dataclass(frozen=True)
class UIComponent:
    ctype: ComponentType
    bounds: Bounds


@dataclass(frozen=True)
class UIScreen:
    """A screen's component list (document order) plus extent and metadata."""

    id: str
    width: int
    height: int
    components: tuple[UIComponent, ...] = field(default_factory=tuple)
    app_id: str | None = None
    category: str | None = None

    @property
    def extent(self) -> Bounds:
        return Bounds(0, 0, self.width, self.height)


@dataclass(frozen=True)
class Violation:
    """One broken invariant, pointing at the offending component (or -1)."""

    component_index: int
    rule: str


def validate_screen(screen: UIScreen) -> list[Violation]:
    """Check all type invariants; returns an empty list iff the screen is valid."""
    violations: list[Violation] = []
    if screen.width <= 0 or screen.height <= 0:
        violations.append(Violation(-1, "non-positive extent"))
        return violations
    extent = screen.extent
    for i, comp in enumerate(screen.components):
        b = comp.bounds
        if b.left < 0 or b.top < 0:
            violations.append(Violation(i, "negative coordinate"))
        if b.is_degenerate():
            violations.append(Violation(i, "degenerate bounds"))
        elif not extent.contains(b):
            violations.append(Violation(i, "out of extent"))
    return violations


def sequence_hash(screen: UIScreen) -> int:
    """Order-sensitive 64-bit digest of the component sequence.

    Hashes the ordered (ctype code, bounds) tuples with blake2b so that the
    value is stable across processes and platforms (unlike builtin hash()).
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(struct.pack("<ii", screen.width, screen.height))
    for comp in screen.components:
        b = comp.bounds
        h.update(struct.pack("<Bqqqq", comp.ctype.code, b.left, b.top, b.right, b.bottom))
    return int.from_bytes(h.digest(), "little")


# --- manifest serialization (line-delimited JSON, one screen per line) ---


def screen_to_dict(screen: UIScreen) -> dict:
    d = {
        "id": screen.id,
        "width": screen.width,
        "height": screen.height,
        "components": [
            {
                "ctype": c.ctype.name,
                "bounds": {
                    "left": c.bounds.left,
                    "top": c.bounds.top,
                    "right": c.bounds.right,
                    "bottom": c.bounds.bottom,
                },
            }
            for c in screen.components
        ],
    }
    if screen.app_id is not None:
        d["app_id"] = screen.app_id
    if screen.category is not None:
        d["category"] = screen.category
    return d


def screen_from_dict(d: dict) -> UIScreen:
    comps = tuple(
        UIComponent(
            ctype=ComponentType[c["ctype"]],
            bounds=Bounds(
                c["bounds"]["left"],
                c["bounds"]["top"],
                c["bounds"]["right"],
                c["bounds"]["bottom"],
            ),
        )
        for c in d.get("components", [])
    )
    return UIScreen(
        id=d["id"],
        width=d["width"],
        height=d["height"],
        components=comps,
        app_id=d.get("app_id"),
        category=d.get("category"),
    )


def screen_to_json(screen: UIScreen) -> str:
    """Canonical single-line JSON (sorted keys, no spaces)."""
    return json.dumps(screen_to_dict(screen), sort_keys=True, separators=(",", ":"))


def write_manifest(screens: Iterable[UIScreen], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in screens:
            fh.write(screen_to_json(s))
            fh.write("\n")


def read_manifest(path) -> Iterator[UIScreen]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield screen_from_dict(json.loads(line))
