"""Wireframe-based UI design search.

Screens are wirified into component-colored rasters, embedded by a
convolutional autoencoder trained without labels, and retrieved by exact
kNN over the latent space. Ships with the treatment-based evaluation
harness and the comparison baselines.
"""

from .model import (
    Bounds,
    ComponentType,
    UIComponent,
    UIScreen,
    sequence_hash,
    validate_screen,
)
from .wirify import RepresentationMode, WireframeImage, palette_lookup, render

__all__ = [
    "Bounds",
    "ComponentType",
    "UIComponent",
    "UIScreen",
    "sequence_hash",
    "validate_screen",
    "RepresentationMode",
    "WireframeImage",
    "palette_lookup",
    "render",
]

__version__ = "0.1.0"
