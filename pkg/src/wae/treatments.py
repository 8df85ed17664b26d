"""Artificial relevant-variant generation for automatic evaluation.

Two perturbations produce "relevant but variant" queries whose ground truth
is the untouched original: shrinking every component toward its center by a
fixed ratio, and removing a random subset of components covering a banded
fraction of the total component area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Bounds, UIComponent, UIScreen
from .prng import SplitMix64

SCALE_RATIOS = (5, 10, 15, 20, 25, 30)  # percent
REMOVAL_BANDS = (10, 20, 30)  # percent, each +/- 5
BAND_HALFWIDTH = 5
MIN_REMOVAL_COMPONENTS = 5
_MAX_RESHUFFLES = 64


@dataclass(frozen=True)
class TreatmentSpec:
    """One of the nine treatments: Scale(ratio) or Remove(band, seed)."""

    kind: str  # "scale" | "remove"
    amount: int  # ratio or band center, percent
    seed: int = 0

    def __post_init__(self):
        if self.kind == "scale":
            if self.amount not in SCALE_RATIOS:
                raise ValueError(f"scale ratio must be one of {SCALE_RATIOS}, got {self.amount}")
        elif self.kind == "remove":
            if self.amount not in REMOVAL_BANDS:
                raise ValueError(f"removal band must be one of {REMOVAL_BANDS}, got {self.amount}")
        else:
            raise ValueError(f"unknown treatment kind {self.kind!r}")

    @property
    def name(self) -> str:
        return f"{self.kind}{self.amount}"


class RemovalInfeasibleError(Exception):
    """No component subset hits the target area band for this screen."""


def scale_components(screen: UIScreen, ratio: int) -> UIScreen:
    """Shrink every component toward its center by ratio percent (round-up).

    Shrink amounts are dw = ceil(ratio*w), dh = ceil(ratio*h); odd amounts
    split with the extra pixel taken from the right/bottom edge. Components
    that would collapse keep a 1-pixel extent at their center.
    """
    if ratio not in SCALE_RATIOS:
        raise ValueError(f"scale ratio must be one of {SCALE_RATIOS}, got {ratio}")
    frac = ratio / 100.0
    out = []
    for comp in screen.components:
        b = comp.bounds
        dw = math.ceil(frac * b.width)
        dh = math.ceil(frac * b.height)
        left = b.left + dw // 2
        top = b.top + dh // 2
        right = b.right - (dw - dw // 2)
        bottom = b.bottom - (dh - dh // 2)
        if right <= left:
            cx = (b.left + b.right) // 2
            left, right = cx, cx + 1
        if bottom <= top:
            cy = (b.top + b.bottom) // 2
            top, bottom = cy, cy + 1
        out.append(UIComponent(comp.ctype, Bounds(left, top, right, bottom)))
    return UIScreen(
        id=screen.id,
        width=screen.width,
        height=screen.height,
        components=tuple(out),
        app_id=screen.app_id,
        category=screen.category,
    )


def remove_components(
    screen: UIScreen, band: int, seed: int, max_reshuffles: int = _MAX_RESHUFFLES
) -> UIScreen:
    """Remove a seed-deterministic subset covering band +/- 5% of total area.

    Subset search: shuffle the component indices, greedily add components to
    the removal set while the removed fraction is below band-5%, accept if
    the result lands inside the band; retry with a fresh shuffle up to 64
    times before declaring the screen infeasible.
    """
    if band not in REMOVAL_BANDS:
        raise ValueError(f"removal band must be one of {REMOVAL_BANDS}, got {band}")
    n = len(screen.components)
    if n < MIN_REMOVAL_COMPONENTS:
        raise ValueError(
            f"screen {screen.id!r} has {n} components; "
            f"removal needs at least {MIN_REMOVAL_COMPONENTS}"
        )
    areas = [c.bounds.area for c in screen.components]
    total = sum(areas)
    lo = (band - BAND_HALFWIDTH) / 100.0
    hi = (band + BAND_HALFWIDTH) / 100.0

    rng = SplitMix64(seed ^ (hash_screen_seed(screen)))
    indices = list(range(n))
    for _ in range(max_reshuffles):
        rng.shuffle(indices)
        removed: set[int] = set()
        removed_area = 0
        for idx in indices:
            if removed_area / total >= lo:
                break
            if len(removed) == n - 1:
                break  # never remove everything
            removed.add(idx)
            removed_area += areas[idx]
        f = removed_area / total
        if lo <= f <= hi and removed:
            kept = tuple(c for i, c in enumerate(screen.components) if i not in removed)
            return UIScreen(
                id=screen.id,
                width=screen.width,
                height=screen.height,
                components=kept,
                app_id=screen.app_id,
                category=screen.category,
            )
    raise RemovalInfeasibleError(
        f"no subset of screen {screen.id!r} covers {band}%±{BAND_HALFWIDTH}% of component area"
    )


def hash_screen_seed(screen: UIScreen) -> int:
    # per-screen stream decorrelation; removal draws differ across screens
    from .model import sequence_hash

    return sequence_hash(screen)


def removed_fraction(original: UIScreen, treated: UIScreen) -> float:
    """Area fraction removed from original to produce treated."""
    total = sum(c.bounds.area for c in original.components)
    kept = sum(c.bounds.area for c in treated.components)
    return (total - kept) / total


@dataclass(frozen=True)
class TreatmentPair:
    original_id: str
    treated: UIScreen


@dataclass
class PairReport:
    pairs: list[TreatmentPair]
    skipped: list[tuple[str, str]]  # (screen id, reason)


def apply_treatment(screen: UIScreen, spec: TreatmentSpec) -> UIScreen:
    if spec.kind == "scale":
        treated = scale_components(screen, spec.amount)
    else:
        treated = remove_components(screen, spec.amount, spec.seed)
    return UIScreen(
        id=f"{screen.id}::{spec.name}",
        width=treated.width,
        height=treated.height,
        components=treated.components,
        app_id=treated.app_id,
        category=treated.category,
    )


def make_pairs(corpus: list[UIScreen], spec: TreatmentSpec) -> PairReport:
    """One treated variant per eligible original; skips are recorded."""
    pairs: list[TreatmentPair] = []
    skipped: list[tuple[str, str]] = []
    for screen in corpus:
        if spec.kind == "remove" and len(screen.components) < MIN_REMOVAL_COMPONENTS:
            skipped.append((screen.id, "fewer than 5 components"))
            continue
        try:
            treated = apply_treatment(screen, spec)
        except RemovalInfeasibleError as exc:
            skipped.append((screen.id, str(exc)))
            continue
        pairs.append(TreatmentPair(screen.id, treated))
    return PairReport(pairs=pairs, skipped=skipped)
