#!/usr/bin/env python3
"""Run the three-model comparison end to end and print the summary table.

Uses the published Muse EEG feature dataset when available (environment
variable EEG_EMOTIONS_CSV, or data/emotions.csv at the repo root); otherwise
falls back to the demonstration dataset, generating it first if needed.

Usage:
    python scripts/reproduce_comparison.py [--out artifacts] [--seed 42]
"""

import argparse
import os
import subprocess
import sys
from pathlib import Path

from eegemo.cli import main as eegemo_main

REPO_ROOT = Path(__file__).resolve().parent.parent


def locate_dataset():
    env = os.environ.get("EEG_EMOTIONS_CSV")
    if env and Path(env).exists():
        return Path(env), "published"
    bundled = REPO_ROOT / "data" / "emotions.csv"
    if bundled.exists():
        return bundled, "published"
    demo = REPO_ROOT / "data_demo" / "demo_features.csv"
    if not demo.exists():
        print("published dataset not found; generating demonstration data instead")
        subprocess.run(
            [sys.executable, str(REPO_ROOT / "scripts" / "make_demo_data.py"),
             "--out", str(REPO_ROOT / "data_demo")],
            check=True,
        )
    return demo, "demo"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="artifacts")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--test-fraction", type=float, default=0.3)
    args = parser.parse_args()

    dataset, source = locate_dataset()
    print(f"dataset: {dataset} ({source})")
    code = eegemo_main(
        [
            "compare",
            "--dataset", str(dataset),
            "--out", args.out,
            "--seed", str(args.seed),
            "--test-fraction", str(args.test_fraction),
        ]
    )
    if code == 0:
        code = eegemo_main(["analyze", "--dataset", str(dataset), "--out", args.out])
    sys.exit(code)


if __name__ == "__main__":
    main()
