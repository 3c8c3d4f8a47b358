"""Desk-scale run: synthesize 7 grating classes, train at full rank, evaluate.

    python scripts/desk_experiment.py --out runs/desk --noise 0.05
"""

import argparse
import sys
from pathlib import Path

from eigenexpr.cli import main as cli


def run(out, noise, seed, variance):
    out = Path(out)
    data, model = out / "data", out / "model.txt"
    steps = [
        ["synth", "--classes", "7", "--train", "20", "--test", "10", "--noise", str(noise),
         "--seed", str(seed), "--out", str(data)],
        ["train", "--manifest", str(data / "manifest.csv"), "--model", str(model), "--variance", str(variance)],
        ["evaluate", "--model", str(model), "--manifest", str(data / "manifest.csv"),
         "--report", str(out / "report.csv"), "--chart", str(out / "chart.csv")],
    ]
    for argv in steps:
        print(f"$ eigenexpr {' '.join(argv)}")
        code = cli(argv)
        if code:
            return code
    return 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="runs/desk")
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--variance", type=float, default=1.0)
    a = p.parse_args()
    sys.exit(run(a.out, a.noise, a.seed, a.variance))
