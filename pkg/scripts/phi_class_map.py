"""Sign map of voa3(phi1) - voa3(phi2) over the (lambda2, lambda4) disc, where the MPC cannot tell them apart."""

import argparse
from pathlib import Path

import numpy as np

from voa import families, plot


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=41)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()
    t = families.scan_phi_class(points=args.points)
    sign = t.column("sign")
    mpc_gap = np.max(np.abs(t.column("mpc_phi1") - t.column("mpc_phi2")))
    print(f"{len(t.rows)} valid points: {int((sign > 0).sum())} positive, {int((sign < 0).sum())} negative, "
          f"{int((sign == 0).sum())} ties; max MPC gap {mpc_gap:.1e}")
    args.out_dir.mkdir(parents=True, exist_ok=True)
    (args.out_dir / "phi_class.csv").write_text(t.to_csv())
    labels = [{1.0: "phi1 > phi2", -1.0: "phi1 < phi2"}.get(s, "equal") for s in sign]
    svg = plot.scatter_chart(t.column("lambda2"), t.column("lambda4"), labels,
                             "sign of voa3(phi1) - voa3(phi2)", "lambda2", "lambda4")
    (args.out_dir / "phi_class.svg").write_text(svg)


if __name__ == "__main__":
    main()
