"""Parsing captured view-hierarchy dumps into screens.

Consumes uiautomator-style XML dumps (<node> elements with class,
bounds="[l,t][r,b]" and visible-to-user attributes), applies the class
merge/drop rules, flattens to leaf-level control components, filters out
WebView-dominated and trivial screens, and deduplicates by the component
sequence hash.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .model import Bounds, ComponentType, UIComponent, UIScreen, sequence_hash

_BOUNDS_RE = re.compile(r"^\[(-?\d+),(-?\d+)\]\[(-?\d+),(-?\d+)\]$")

# classes folded into a roster type because they look and act the same
MERGED_CLASSES = {
    "MultiAutoCompleteTextView": ComponentType.EditText,
    "ImageButton": ComponentType.Button,
}

# classes dropped outright (rare composites that decompose into children)
DROPPED_CLASSES = {"CalendarView", "CalenderView", "TimePicker", "DatePicker"}

_ROSTER_BY_NAME = {t.name: t for t in ComponentType}

WEBVIEW_AREA_LIMIT = 0.5
MIN_COMPONENTS = 2


class MapResult(Enum):
    ROSTER = "roster"
    MERGED = "merged"
    DROPPED = "dropped"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ClassMapping:
    result: MapResult
    ctype: ComponentType | None = None


@dataclass
class RawNode:
    class_name: str
    bounds: Bounds | None
    visible: bool = True
    children: list["RawNode"] = field(default_factory=list)


@dataclass
class IngestReport:
    accepted: int = 0
    rejected_webview: int = 0
    rejected_trivial: int = 0
    rejected_duplicate: int = 0

    @property
    def total(self) -> int:
        return (
            self.accepted
            + self.rejected_webview
            + self.rejected_trivial
            + self.rejected_duplicate
        )

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejected_webview": self.rejected_webview,
            "rejected_trivial": self.rejected_trivial,
            "rejected_duplicate": self.rejected_duplicate,
        }


class DumpParseError(ValueError):
    """Malformed dump document; carries an approximate byte offset."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


def parse_bounds(text: str, node_name: str = "node") -> Bounds:
    m = _BOUNDS_RE.match(text.strip())
    if not m:
        raise DumpParseError(f"malformed bounds {text!r} on {node_name}")
    left, top, right, bottom = (int(g) for g in m.groups())
    if left >= right or top >= bottom:
        raise DumpParseError(
            f"degenerate bounds {text!r} on {node_name} (need left < right and top < bottom)"
        )
    return Bounds(left, top, right, bottom)


def simple_class_name(class_name: str) -> str:
    return class_name.rsplit(".", 1)[-1].rsplit("$", 1)[-1]


def map_class(class_name: str) -> ClassMapping:
    """Roster membership of a runtime class name.

    Merged classes report MERGED with the merge target; suffix matching
    covers vendor subclasses like somepkg.AppCompatButton.
    """
    simple = simple_class_name(class_name)
    if simple in MERGED_CLASSES:
        return ClassMapping(MapResult.MERGED, MERGED_CLASSES[simple])
    if simple in DROPPED_CLASSES:
        return ClassMapping(MapResult.DROPPED)
    if simple in _ROSTER_BY_NAME:
        return ClassMapping(MapResult.ROSTER, _ROSTER_BY_NAME[simple])
    # vendor widgets usually subclass and keep the framework name as suffix
    for name, ctype in _ROSTER_BY_NAME.items():
        if simple.endswith(name):
            return ClassMapping(MapResult.ROSTER, ctype)
    for name, target in MERGED_CLASSES.items():
        if simple.endswith(name):
            return ClassMapping(MapResult.MERGED, target)
    for name in DROPPED_CLASSES:
        if simple.endswith(name):
            return ClassMapping(MapResult.DROPPED)
    return ClassMapping(MapResult.UNKNOWN)


def _node_from_element(el: ET.Element) -> RawNode:
    bounds_attr = el.get("bounds")
    bounds = parse_bounds(bounds_attr, el.get("class", "node")) if bounds_attr else None
    visible = el.get("visible-to-user", el.get("visible", "true")).lower() != "false"
    node = RawNode(
        class_name=el.get("class", ""),
        bounds=bounds,
        visible=visible,
    )
    for child in el:
        if child.tag == "node":
            node.children.append(_node_from_element(child))
    return node


def parse_dump(document: bytes | str) -> RawNode:
    """Parse one dump document into a RawNode tree."""
    data = document.encode() if isinstance(document, str) else document
    try:
        root_el = ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        offset = 0
        for i, text_line in enumerate(data.splitlines(keepends=True), start=1):
            if i == line:
                offset += col
                break
            offset += len(text_line)
        raise DumpParseError(f"XML parse error: {exc.msg}", offset=offset) from exc
    if root_el.tag == "node":
        return _node_from_element(root_el)
    if root_el.tag == "hierarchy":
        nodes = [child for child in root_el if child.tag == "node"]
        if not nodes:
            raise DumpParseError("hierarchy element contains no node")
        return _node_from_element(nodes[0])
    raise DumpParseError(f"unexpected root element {root_el.tag!r}")


def extract_screen(tree: RawNode, screen_id: str, app_id=None, category=None) -> UIScreen:
    """Flatten the tree to leaf-level roster components in document order.

    A mapped node with mapped descendants yields only the descendants
    (containers like ListView draw their rows, not themselves); a mapped
    node with none yields itself. Invisible subtrees are pruned. Components
    are clipped to the root extent; anything degenerate after clipping is
    dropped.
    """
    if tree.bounds is None:
        raise DumpParseError("root node has no bounds")
    root = tree.bounds
    width, height = root.width, root.height

    def mapped_type(node: RawNode) -> ComponentType | None:
        mapping = map_class(node.class_name)
        if mapping.result in (MapResult.ROSTER, MapResult.MERGED):
            return mapping.ctype
        return None

    def clip(b: Bounds) -> Bounds | None:
        left = max(b.left - root.left, 0)
        top = max(b.top - root.top, 0)
        right = min(b.right - root.left, width)
        bottom = min(b.bottom - root.top, height)
        if right <= left or bottom <= top:
            return None
        return Bounds(left, top, right, bottom)

    def walk(node: RawNode) -> tuple[bool, list[UIComponent]]:
        """Returns (any component emitted in this subtree, components)."""
        if not node.visible:
            return False, []
        child_emitted = False
        collected: list[UIComponent] = []
        for child in node.children:
            emitted, items = walk(child)
            child_emitted = child_emitted or emitted
            collected.extend(items)
        if child_emitted:
            return True, collected
        ctype = mapped_type(node)
        if ctype is not None and node.bounds is not None:
            bounds = clip(node.bounds)
            if bounds is not None:
                return True, [UIComponent(ctype, bounds)]
        return False, []

    _, ordered = walk(tree)
    return UIScreen(
        id=screen_id,
        width=width,
        height=height,
        components=tuple(ordered),
        app_id=app_id,
        category=category,
    )


@dataclass(frozen=True)
class FilterVerdict:
    keep: bool
    reason: str | None = None  # "webview" | "trivial"


def filter_screen(screen: UIScreen) -> FilterVerdict:
    """Reject WebView-dominated screens and trivial designs."""
    screen_area = screen.width * screen.height
    webview_area = sum(
        c.bounds.area for c in screen.components if c.ctype is ComponentType.WebView
    )
    if webview_area > WEBVIEW_AREA_LIMIT * screen_area:
        return FilterVerdict(False, "webview")
    if len(screen.components) < MIN_COMPONENTS:
        return FilterVerdict(False, "trivial")
    return FilterVerdict(True)


def dedup(screens: Iterable[UIScreen]) -> tuple[list[UIScreen], IngestReport]:
    """Keep the first occurrence of each sequence hash."""
    report = IngestReport()
    seen: set[int] = set()
    unique: list[UIScreen] = []
    for screen in screens:
        digest = sequence_hash(screen)
        if digest in seen:
            report.rejected_duplicate += 1
            continue
        seen.add(digest)
        unique.append(screen)
        report.accepted += 1
    return unique, report


def ingest_dumps(
    documents: Iterable[tuple[str, bytes]],
) -> tuple[list[UIScreen], IngestReport]:
    """Full pipeline: parse, extract, filter, dedup.

    documents: (screen id, dump bytes) pairs. Returns kept screens and a
    report whose counters sum to the number of input documents.
    """
    report = IngestReport()
    kept: list[UIScreen] = []
    seen: set[int] = set()
    for screen_id, payload in documents:
        tree = parse_dump(payload)
        screen = extract_screen(tree, screen_id)
        verdict = filter_screen(screen)
        if not verdict.keep:
            if verdict.reason == "webview":
                report.rejected_webview += 1
            else:
                report.rejected_trivial += 1
            continue
        digest = sequence_hash(screen)
        if digest in seen:
            report.rejected_duplicate += 1
            continue
        seen.add(digest)
        kept.append(screen)
        report.accepted += 1
    return kept, report
