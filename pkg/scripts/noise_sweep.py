"""Accuracy and retained components as pixel noise grows.

Prints one line per (noise, variance threshold): k and total accuracy,
for both nearest-neighbour and nearest-centroid classification.
"""

import argparse
import tempfile

from eigenexpr import pca
from eigenexpr.classify import ClassifierConfig, batch_classify
from eigenexpr.evaluation import score
from eigenexpr.ingest import IngestConfig, load_manifest
from eigenexpr.synth import generate_synthetic


def sweep(noises, thresholds, size, seed):
    print(f"{'noise':>6} {'var':>5} {'k':>4} {'nn_acc':>7} {'nc_acc':>7}")
    for noise in noises:
        with tempfile.TemporaryDirectory() as tmp:
            manifest = generate_synthetic(tmp, 7, 20, 10, size, size, noise, seed)
            ds = load_manifest(manifest, IngestConfig(size, size))
        for thr in thresholds:
            model = pca.train(ds, pca.TrainConfig(variance_threshold=thr))
            acc = [score(batch_classify(model, ds, ClassifierConfig(method))).accuracy()
                   for method in ("nearest_neighbor", "nearest_centroid")]
            print(f"{noise:6.2f} {thr:5.2f} {model.k:4d} {acc[0]:7.3f} {acc[1]:7.3f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--noise", type=float, nargs="+", default=[0.05, 0.25, 0.5, 0.8])
    p.add_argument("--variance", type=float, nargs="+", default=[0.5, 0.95, 1.0])
    p.add_argument("--size", type=int, default=32)
    p.add_argument("--seed", type=int, default=42)
    a = p.parse_args()
    sweep(a.noise, a.variance, a.size, a.seed)
