"""Create treated query variants and run the automatic evaluation.

Each original screen produces a "relevant but variant" query: components
shrunk toward their centers (scale) or a random area-banded subset dropped
(remove). Retrieval quality = how often the untouched original comes back
first when the treated variant is the query.
"""

import numpy as np

from wae.autoencoder import WaeConfig, train
from wae.corpus import generate_corpus
from wae.evaluate import ExperimentSpec, format_report_table, run_experiment
from wae.treatments import TreatmentSpec, removed_fraction, scale_components, remove_components
from wae.wirify import RepresentationMode, render

screens = generate_corpus(seed=11, n=120)

# what the treatments do to one screen
screen = screens[0]
scaled = scale_components(screen, 20)
print(f"scale-20 on {screen.id}: first bounds {screen.components[0].bounds} -> {scaled.components[0].bounds}")
removed = remove_components(screen, 20, seed=9)
frac = removed_fraction(screen, removed)
print(f"remove-20: {len(screen.components)} -> {len(removed.components)} components ({frac:.1%} of area)")

# train a quick model and run three experiments
rasters = np.stack([render(s, RepresentationMode.Color, (48, 64)).values for s in screens])
model = train(WaeConfig(width=48, height=64, epochs=12, batch_size=24, seed=1), rasters).model

rows = []
for kind, amount in (("scale", 10), ("scale", 20), ("remove", 20)):
    spec = ExperimentSpec("wae", TreatmentSpec(kind, amount), seed=99)
    row, _logs = run_experiment(screens, spec, wae_model=model)
    rows.append(row)

print()
print(format_report_table(rows))
