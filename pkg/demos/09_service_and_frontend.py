"""Prepare everything the search service needs, then print how to run it.

The service exposes POST /api/search plus per-screen wireframe PNGs and
metadata; the frontend in frontend/ talks to exactly that API.
"""

import json
import urllib.request
import numpy as np

from wae.autoencoder import WaeConfig, train
from wae.corpus import generate_corpus
from wae.index import build_index, save_index
from wae.model import write_manifest
from wae.wirify import RepresentationMode, render

screens = generate_corpus(seed=11, n=120)
rasters = np.stack([render(s, RepresentationMode.Color, (48, 64)).values for s in screens])
model = train(WaeConfig(width=48, height=64, epochs=12, batch_size=24, seed=1), rasters).model

model.save("demo_model.wae")
write_manifest(screens, "demo_manifest.jsonl")
save_index(build_index(model, screens, RepresentationMode.Color), "demo_index.bin")
print("artifacts ready: demo_model.wae demo_index.bin demo_manifest.jsonl")

print(
    """
run the service:

    wae serve --model demo_model.wae --index demo_index.bin \\
              --manifest demo_manifest.jsonl --port 8000

then either open the drawing frontend:

    cd frontend && npm install && VITE_SERVICE_URL=http://127.0.0.1:8000 npm run dev

or query the API directly:
"""
)

body = {
    "extent": {"width": 360, "height": 640},
    "components": [
        {"ctype": "TextView", "bounds": {"left": 20, "top": 30, "right": 240, "bottom": 70}},
        {"ctype": "EditText", "bounds": {"left": 20, "top": 110, "right": 340, "bottom": 160}},
        {"ctype": "Button", "bounds": {"left": 60, "top": 280, "right": 300, "bottom": 340}},
    ],
    "k": 5,
}
print("    curl -X POST http://127.0.0.1:8000/api/search \\")
print("         -H 'Content-Type: application/json' \\")
print(f"         -d '{json.dumps(body)}'")
