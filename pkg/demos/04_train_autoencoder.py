"""Train the wireframe autoencoder on a small corpus and inspect it.

Desk-scale settings: 120 screens at 48x64 for a couple of minutes. The
encoder compresses a 48x64x3 wireframe into a 768-dim latent vector; the
decoder reconstructs the raster from it. Reconstructions sharpen epoch by
epoch as the loss falls.
"""

import numpy as np

from wae.autoencoder import WaeConfig, decode, encode, train
from wae.corpus import generate_corpus
from wae.wirify import RepresentationMode, WireframeImage, render, save_png

screens = generate_corpus(seed=11, n=120)
rasters = np.stack([render(s, RepresentationMode.Color, (48, 64)).values for s in screens])

config = WaeConfig(width=48, height=64, epochs=12, batch_size=24, seed=1)
print(f"latent dimension: {config.latent_dim}")

result = train(config, rasters, log=lambda e, l: print(f"epoch {e:>2}: loss {l:.5f}"))
model = result.model

# round-trip one wireframe through the bottleneck
original = render(screens[0], RepresentationMode.Color, (48, 64))
latent = encode(model, original)
recon = decode(model, latent)
print(f"\nlatent shape {latent.shape}, reconstruction shape {recon.shape}")
print(f"reconstruction MSE: {float(np.mean((recon - original.values) ** 2)):.5f}")

save_png(original, "recon_input.png")
save_png(WireframeImage(np.clip(recon, 0, 1).astype(np.float32)), "recon_output.png")
model.save("demo_model.wae")
print("wrote recon_input.png, recon_output.png, demo_model.wae")
