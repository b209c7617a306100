"""Fit errors of both bases on the benchmark targets over several error grids.

Usage: python3 scripts/benchmarks.py [--grids 201 1001] [--sweep] [--json out.json]

``--sweep`` adds a degree sweep around each nominal degree (n = m for surfaces).
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from orthobern import BasisSpec, degree_sweep, fit_curve, fit_surface
from orthobern.testfns import (
    LangermannParams,
    LissajousParams,
    SincParams,
    langermann_surface,
    lissajous,
    sinc_surface,
)


@dataclass(frozen=True)
class Case:
    name: str
    degree: int
    surface: bool


@dataclass(frozen=True)
class BenchConfig:
    grids: tuple = (201, 1001)
    cases: tuple = field(
        default_factory=lambda: (Case("lissajous", 20, False), Case("sinc", 12, True), Case("langermann", 13, True))
    )


def target(name):
    if name == "lissajous":
        p = LissajousParams()
        return (lambda t: lissajous(p, t)), p.t_interval
    if name == "sinc":
        p = SincParams()
        return (lambda x, y: sinc_surface(p, x, y)), p.domain
    p = LangermannParams()
    return (lambda x, y: langermann_surface(p, x, y)), p.domain


def run_case(case: Case, grid: int, basis: str):
    f, iv = target(case.name)
    spec = BasisSpec(case.degree, iv)
    if case.surface:
        return fit_surface(f, spec, spec, basis, samples=grid)
    return fit_curve(f, spec, basis, samples=grid)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grids", type=int, nargs="+", default=list(BenchConfig.grids))
    ap.add_argument("--sweep", action="store_true")
    ap.add_argument("--json", help="write all results here")
    args = ap.parse_args(argv)
    cfg = BenchConfig(grids=tuple(args.grids))

    results = []
    print(f"{'target':<11} {'n':>3} {'grid':>5}  {'E ortho':>10}  {'E bezier':>10}  {'secs':>5}")
    for case in cfg.cases:
        for grid in cfg.grids:
            start = time.perf_counter()
            errs = {b: run_case(case, grid, b).error for b in ("ortho", "bernstein")}
            secs = time.perf_counter() - start
            e_o, e_b = errs["ortho"], errs["bernstein"]
            print(f"{case.name:<11} {case.degree:>3} {grid:>5}  {e_o:10.3e}  {e_b:10.3e}  {secs:5.1f}")
            results.append({"target": case.name, "n": case.degree, "grid": grid, **errs})

    sweeps = {}
    if args.sweep:
        for case in cfg.cases:
            f, iv = target(case.name)
            reps = degree_sweep(f, range(case.degree - 4, case.degree + 5), iv, iv if case.surface else None)
            sweeps[case.name] = {r.n: r.error for r in reps}
            best = min(reps, key=lambda r: r.error)
            line = "  ".join(f"{r.n}:{r.error:.2e}" for r in reps)
            print(f"sweep {case.name}: {line}  -> best n={best.n}")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"fits": results, "sweeps": sweeps}, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
