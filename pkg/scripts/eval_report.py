#!/usr/bin/env python3
"""Evaluate a checkpoint (or the built-in baselines) across mask-ratio bins.

Writes metrics.csv, summary.json, and ratio_curves.csv, mirroring the CLI's
eval command but also exposing the identity and constant-fill baselines for
sanity curves without a trained model.
"""

import argparse
from pathlib import Path

from muralinpaint.data.manifest import DatasetManifest
from muralinpaint.evaluation.report import (
    ConstantFillModel,
    IdentityModel,
    evaluate_set,
)
from muralinpaint.models.bundle import ModelBundle


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--manifest", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--checkpoint", default=None,
                        help="Trained checkpoint; omit to run a baseline.")
    parser.add_argument("--baseline", choices=["identity", "constant"],
                        default="constant")
    parser.add_argument("--bins", default="10,20,30,40,50")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if args.checkpoint:
        model = ModelBundle.load(args.checkpoint)
    elif args.baseline == "identity":
        model = IdentityModel()
    else:
        model = ConstantFillModel()

    manifest = DatasetManifest.load(args.manifest)
    report = evaluate_set(
        model, manifest,
        mask_bins=tuple(int(b) for b in args.bins.split(",")),
        seed=args.seed,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report.write_csv(out / "metrics.csv")
    report.write_summary(out / "summary.json")
    report.write_plot_data(out / "ratio_curves.csv")
    print("overall:", report.overall)
    for b in sorted(report.per_bin):
        print(f"bin {b:>2}%:", report.per_bin[b])


if __name__ == "__main__":
    main()
