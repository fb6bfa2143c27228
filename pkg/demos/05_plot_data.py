"""Barycentric plot data for three-label losses.

Emits the prediction-set polygons, the pair-midpoint markers and the
dominant-label boundary lines as a pure-data JSON document; any plotting
front end can render it.  The same document is available from the
command line:  marginlab plotdata --corpus squared-3
"""
import json
import sys

from marginlab.corpus import corpus_loss
from marginlab.documents import LossDocument, geometry_document

for name in ("zero-one-3", "chain-3", "squared-3"):
    doc = LossDocument(name=name, loss=corpus_loss(name))
    geometry = geometry_document(doc)
    print(f"=== {name} ===")
    for region in geometry["regions"]:
        corners = " ".join("(" + ",".join(p) + ")" for p in region["polygon"])
        print(f"  region of label {region['y']}: {corners}")
    print("  midpoint markers:", geometry["markers"]["pair_midpoints"])
    print()

if len(sys.argv) > 1:  # optionally dump one document in full
    doc = LossDocument(name=sys.argv[1], loss=corpus_loss(sys.argv[1]))
    json.dump(geometry_document(doc), sys.stdout, indent=2, sort_keys=True)
    print()
