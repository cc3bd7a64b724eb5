"""Run the bundled projectile case study end to end.

Thin wrapper over the demo pipeline: certify the hypotheses, locate the
contraction threshold, list certified windows, solve, and cross-check the
solution against the independent trajectory integrator. Artifacts land in
the output directory.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import hammerline as hl

SCENARIO = Path(__file__).resolve().parent.parent / "scenarios" / \
    "boosted_projectile_c2.json"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/demo", help="output directory")
    parser.add_argument("--grid-size", type=int, default=41)
    parser.add_argument("--seed", type=int, default=None)
    args = parser.parse_args()
    return hl.run_scenario(SCENARIO, "demo-projectile", out_dir=args.out,
                           grid_size=args.grid_size, seed=args.seed)


if __name__ == "__main__":
    sys.exit(main())
