"""Check the neutral-signature property of regular hulls on random phi-invariant singular subspaces.

    python scripts/hull_theorem.py --trials 1000 --seed 1
"""
import argparse
import sys
from collections import Counter
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from generators import random_phi_invariant_singular  # noqa: E402
from paraslant.neutral_linalg import regular_hull, signature, singularity  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=600)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tau", type=float, default=1e-9)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    shapes = Counter()
    failures = 0
    for t in range(args.trials):
        n = 2 + t % 3
        space, phi, w, k, l = random_phi_invariant_singular(rng, n)
        h = regular_hull(space, w, args.tau, rng=rng)
        sig = tuple(signature(h.gram(), args.tau))
        ok = sig == (k + l, k + l, 0) and h.dim == w.dim + singularity(space, w, args.tau).dim
        failures += not ok
        shapes[(2 * n, k, l)] += 1
    print(f"{args.trials} trials, {failures} failures")
    for (dim, k, l), count in sorted(shapes.items()):
        print(f"  dim {dim}: k = {k}, l = {l}: {count}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
