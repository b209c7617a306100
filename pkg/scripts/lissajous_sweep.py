"""Degree sweep for the Lissajous curve, two ways of evaluating phi_{j,n}.

``exact``    correctly rounded values (the library default)
``floating`` the signed Bernstein combination summed in double precision

Usage: python3 scripts/lissajous_sweep.py [--lo 12] [--hi 28] [--csv out.csv]
"""

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from orthobern import BasisSpec, QuadratureRule, onb_eval_all
from orthobern.basis import onb_eval_combo
from orthobern.testfns import LissajousParams, lissajous


@dataclass(frozen=True)
class SweepConfig:
    lo: int = 12
    hi: int = 28
    samples: int = 1001
    panels: int = 64
    nodes: int = 16


def floating_matrix(spec, x):
    return np.stack([onb_eval_combo(spec, j, x) for j in range(spec.n + 1)], axis=-1)


def sweep(cfg: SweepConfig):
    params = LissajousParams()
    iv = params.t_interval
    xq, wq = QuadratureRule(cfg.panels, cfg.nodes).on(iv)
    t = iv.linspace(cfg.samples)
    fq = np.stack(lissajous(params, xq))
    ft = np.stack(lissajous(params, t))
    for n in range(cfg.lo, cfg.hi + 1):
        spec = BasisSpec(n, iv)
        row = {"n": n}
        for label, basis in (("exact", onb_eval_all), ("floating", floating_matrix)):
            coeffs = basis(spec, xq).T @ (wq * fq).T / iv.length
            recon = basis(spec, t) @ coeffs
            row[label] = float(np.mean(np.sum((recon.T - ft) ** 2, axis=0)))
        yield row


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=int, default=SweepConfig.lo)
    ap.add_argument("--hi", type=int, default=SweepConfig.hi)
    ap.add_argument("--samples", type=int, default=SweepConfig.samples)
    ap.add_argument("--csv", help="also write the table here")
    args = ap.parse_args(argv)
    rows = list(sweep(SweepConfig(args.lo, args.hi, args.samples)))

    print(f"{'n':>3}  {'E exact':>11}  {'E floating':>11}")
    for r in rows:
        print(f"{r['n']:>3}  {r['exact']:11.3e}  {r['floating']:11.3e}")
    for label in ("exact", "floating"):
        best = min(rows, key=lambda r: r[label])
        print(f"minimum ({label}): n={best['n']}  E={best[label]:.3e}")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["n", "exact", "floating"])
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
