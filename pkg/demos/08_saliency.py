"""Visualize what the encoder attends to with gradient saliency.

The saliency map is the per-pixel magnitude of the reconstruction-loss
gradient with respect to the input. On a model overfit to one wireframe,
component pixels light up and the empty canvas stays dark.
"""

import numpy as np

from wae.autoencoder import WaeConfig, saliency, train
from wae.corpus import TemplateKind, generate_screen
from wae.wirify import RepresentationMode, WireframeImage, render, save_png

screen = generate_screen(seed=9, kind=TemplateKind.Settings)
image = render(screen, RepresentationMode.Color, (48, 64))

result = train(
    WaeConfig(width=48, height=64, epochs=150, batch_size=1, seed=4),
    image.values[None],
)
print(f"overfit loss: {result.loss_history[0]:.4f} -> {result.loss_history[-1]:.5f}")

heat = saliency(result.model, image)
print(f"saliency map {heat.shape}, range [{heat.min():.2f}, {heat.max():.2f}]")

component_mask = np.any(image.values != 1.0, axis=2)
on_components = heat[component_mask].mean()
on_background = heat[~component_mask].mean()
print(f"mean saliency on components {on_components:.3f} vs background {on_background:.3f}")

save_png(image, "saliency_input.png")
save_png(WireframeImage(heat[:, :, None].astype(np.float32)), "saliency_heat.png")
print("wrote saliency_input.png, saliency_heat.png")
