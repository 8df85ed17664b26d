"""Compare the neural search against the three baselines.

Color histograms capture pixel statistics but not layout; component
matching scores per-component geometry with hard thresholds; the
fully-connected autoencoder sees a text/non-text raster. The component
matcher is perfect under removal (surviving components still match
exactly) and collapses under scaling (every component drifts past the
threshold) - the convolutional model degrades gracefully on both.
"""

import numpy as np

from wae.autoencoder import WaeConfig, train
from wae.baselines import guifetch_similarity, histogram_distance, histogram_feature, train_fcae
from wae.corpus import generate_corpus
from wae.evaluate import ExperimentSpec, format_report_table, run_experiment
from wae.treatments import TreatmentSpec, scale_components
from wae.wirify import RepresentationMode, render

screens = generate_corpus(seed=11, n=120)

# pointwise intuition first: similarity of one treated screen to its original
original = screens[0]
print(f"guifetch_similarity(original, original)    = {guifetch_similarity(original, original):.3f}")
print(f"guifetch_similarity(scale-20'd, original)  = {guifetch_similarity(scale_components(original, 20), original):.3f}")

img_a = render(screens[0], RepresentationMode.Color, (48, 64))
img_b = render(screens[1], RepresentationMode.Color, (48, 64))
print(f"histogram_distance(screen0, screen1)       = {histogram_distance(histogram_feature(img_a), histogram_feature(img_b)):.4f}")

# full experiments, all four methods at scale-10 and remove-20
rasters = np.stack([render(s, RepresentationMode.Color, (48, 64)).values for s in screens])
wae_model = train(WaeConfig(width=48, height=64, epochs=12, batch_size=24, seed=1), rasters).model
fcae_model, _ = train_fcae(screens, epochs=12, batch_size=24, seed=1)

rows = []
for kind, amount in (("scale", 10), ("remove", 20)):
    treatment = TreatmentSpec(kind, amount)
    for method in ("wae", "hist", "guifetch", "fcae"):
        spec = ExperimentSpec(method, treatment, seed=99)
        row, _ = run_experiment(
            screens, spec, wae_model=wae_model, fcae_model=fcae_model, raster_size=(48, 64)
        )
        rows.append(row)

print()
print(format_report_table(rows))
