"""Render one screen under the three wireframe representations.

Grey mode assigns each component type an even grey level, color mode a
distinct full-saturation hue, texture mode overlays a per-type halftone
pattern on the hue. Output PNGs land in the working directory.
"""

from wae.corpus import TemplateKind, generate_screen
from wae.wirify import RepresentationMode, palette_lookup, render, save_png
from wae.model import ComponentType

screen = generate_screen(seed=5, kind=TemplateKind.Form)
print(f"screen {screen.id}: {len(screen.components)} components")

for mode in RepresentationMode:
    image = render(screen, mode, (270, 480))
    out = f"wireframe_{mode.value}.png"
    save_png(image, out)
    print(f"{mode.name:<8} -> {out}  ({image.width}x{image.height}x{image.channels})")

# the palette behind the rendering:
print("\npalette (first four types):")
for ctype in list(ComponentType)[:4]:
    grey = palette_lookup(RepresentationMode.Grey, ctype)
    rgb = palette_lookup(RepresentationMode.Color, ctype)
    print(f"  {ctype.name:<10} grey={grey:.3f} rgb=({rgb[0]:.2f},{rgb[1]:.2f},{rgb[2]:.2f})")
