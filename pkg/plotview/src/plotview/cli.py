"""render --in <artifact-or-dir> --out <dir> [--format png|svg]

Renders one JSON artifact, or every artifact under a directory tree
(manifest.json files are run metadata, not artifacts, and are ignored).
Exits nonzero on the first malformed artifact, unsupported schema version,
or unknown artifact kind.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FigureJob, render
from .schema import ArtifactError


def collect_artifacts(root: Path) -> list[Path]:
    if root.is_file():
        return [root]
    paths = [
        p
        for p in sorted(root.rglob("*.json"))
        if p.name != "manifest.json"
    ]
    return paths


def output_name(root: Path, artifact: Path, fmt: str) -> str:
    if root.is_file():
        return f"{artifact.stem}.{fmt}"
    relative = artifact.relative_to(root).with_suffix("")
    return "_".join(relative.parts) + f".{fmt}"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render eegemo JSON artifacts as figures"
    )
    parser.add_argument("--in", dest="source", required=True, type=Path,
                        help="artifact file or directory of artifacts")
    parser.add_argument("--out", dest="out_dir", required=True, type=Path,
                        help="directory for the rendered images")
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    args = parser.parse_args(argv)

    if not args.source.exists():
        print(f"error: {args.source} does not exist", file=sys.stderr)
        return 1
    artifacts = collect_artifacts(args.source)
    if not artifacts:
        print(f"error: no artifacts found under {args.source}", file=sys.stderr)
        return 1
    rendered = 0
    for artifact in artifacts:
        target = args.out_dir / output_name(args.source, artifact, args.format)
        try:
            render(FigureJob(artifact_path=artifact, output_path=target))
        except ArtifactError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"rendered {artifact} -> {target}")
        rendered += 1
    print(f"{rendered} figure(s) written to {args.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
