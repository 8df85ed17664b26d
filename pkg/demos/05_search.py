"""Index a corpus and search it with a hand-sketched wireframe.

The query never has to exist in the corpus: any component layout can be
sketched as a list of (type, bounds). Nearest designs come back ranked by
squared distance in latent space.
"""

import numpy as np

from wae.autoencoder import WaeConfig, encode, train
from wae.corpus import generate_corpus
from wae.index import build_index, knn, save_index
from wae.model import Bounds, ComponentType, UIComponent, UIScreen
from wae.wirify import RepresentationMode, render

screens = generate_corpus(seed=11, n=120)
rasters = np.stack([render(s, RepresentationMode.Color, (48, 64)).values for s in screens])
model = train(WaeConfig(width=48, height=64, epochs=12, batch_size=24, seed=1), rasters).model

index = build_index(model, screens, RepresentationMode.Color)
save_index(index, "demo_index.bin")
print(f"indexed {len(index)} screens at dim {index.dim}")

# sketch a login-ish form: title, two inputs, a wide submit button
sketch = UIScreen(
    id="sketch",
    width=360,
    height=640,
    components=(
        UIComponent(ComponentType.TextView, Bounds(20, 30, 240, 70)),
        UIComponent(ComponentType.EditText, Bounds(20, 110, 340, 160)),
        UIComponent(ComponentType.EditText, Bounds(20, 180, 340, 230)),
        UIComponent(ComponentType.Button, Bounds(60, 280, 300, 340)),
    ),
)
latent = encode(model, render(sketch, RepresentationMode.Color, (48, 64)))

print("\ntop-10 nearest designs:")
for hit in knn(index, latent, k=10):
    screen = screens[[s.id for s in screens].index(hit.screen_id)]
    print(f"  #{hit.rank:>2} {hit.screen_id:<12} d={hit.distance:8.3f} [{screen.category}]")
