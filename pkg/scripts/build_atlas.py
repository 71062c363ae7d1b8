#!/usr/bin/env python3
"""Build the who-wins atlas from the packaged seed catalog and write the
knowledge base, text grids, and tail summaries into an output directory."""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from domineering.board import Topology
from domineering.knowledge import atlas_grid, atlas_text, saturate, save_kb, tail_theorem
from domineering.seeds import default_knowledge_base


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="atlas-out", help="output directory")
    parser.add_argument("--horizon", type=int, default=64)
    parser.add_argument("--max-width", type=int, default=13)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    kb = default_knowledge_base(length_horizon=args.horizon)
    report = saturate(kb)
    print(report.summary())

    save_kb(kb, str(out / "knowledge.jsonl"))
    summary = {}
    for topo in Topology:
        text = atlas_text(kb, topo, args.max_width, min(args.horizon, 40))
        (out / f"atlas-{topo.value}.txt").write_text(text + "\n")
        cells = atlas_grid(kb, topo, args.max_width, args.horizon)
        (out / f"atlas-{topo.value}.json").write_text(json.dumps(cells))
    for width in (2, 3, 4, 5, 7, 9, 11):
        cert = tail_theorem(kb, width)
        summary[width] = (
            {"start": cert.start, "period": cert.period} if cert else None
        )
        label = f"H for all n >= {cert.start} (period {cert.period})" if cert else "no tail"
        print(f"width {width:>2}: {label}")
    (out / "tails.json").write_text(json.dumps(summary, indent=2))
    print(f"artifacts written to {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
