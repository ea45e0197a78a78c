"""Sweep the flat variable-slant model along a leaf and print lambda against the field.

    python scripts/sweep_example2.py --field "2 + 0.5*sin(x1)" --case phi1 -n 11
"""
import argparse

import numpy as np

from paraslant.models import build_example2
from paraslant.slant_analysis import analyze_point, lagrangian_residual


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--field", default="2 + 0.5*sin(x1)")
    ap.add_argument("--case", default="phi1", choices=["phi1", "phi2"])
    ap.add_argument("--leaf", type=float, nargs=2, default=(0.0, 0.0))
    ap.add_argument("-n", type=int, default=11, help="points along u1 in [-1, 1]")
    args = ap.parse_args()

    m = build_example2(args.field, args.case, leaf=args.leaf)
    print(f"{'u1':>8} {'lambda':>14} {'field':>14} {'case':>8} {'lagrangian':>12} {'max_res':>10}")
    for u1 in np.linspace(-1, 1, args.n):
        u = np.array([u1, 0.0])
        rep = analyze_point(m.structure, m.surface, u)
        field = m.lambda_at(rep.x)
        res = max(rep.residuals.get(k, 0.0) for k in ("slant", "gAA", "phiA", "phi_reconstruct"))
        lag = lagrangian_residual(m.structure, m.surface, u)
        print(f"{u1:8.3f} {rep.lam:14.10f} {field:14.10f} {rep.case_tag.value:>8} {lag:12.6f} {res:10.2e}")


if __name__ == "__main__":
    main()
