"""Inequality lab report.

Random trials of the elementary inequalities, the K(v,z) lower bound in
its explicit-constant form, the d2 scan over δ and the ρ1 search for the
small-v form of the bound. Prints one JSON document.
"""
import argparse
import json

import numpy as np

from mecsbp.ineqlab import d2_delta, default_kvz_grid, kvz_bounds_check, rho0_scan, young_check
from mecsbp.stablejump import StableMeasure


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=1.5)
    ap.add_argument("--rho1", type=float, default=2.0)
    ap.add_argument("--rho", type=float, default=0.25)
    ap.add_argument("--delta", type=float, default=8.0)
    ap.add_argument("--rho-tilde", type=float, default=0.5)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()

    m = StableMeasure(a.alpha)
    rng = np.random.default_rng(a.seed)
    out = {"young": {}}
    for v in ("i", "ii_le1", "ii_gt1", "iii"):
        rep = young_check(v, trials=a.trials, rng=rng)
        out["young"][v] = {"satisfied": rep.satisfied, "worst_margin": rep.worst_margin}
    kv = kvz_bounds_check(m, a.rho1, a.rho, default_kvz_grid(10), mode="lemma_ii", delta=a.delta)
    out["kvz_lemma_ii"] = {"satisfied": kv.satisfied, "worst_margin": kv.worst_margin}
    deltas = [1, 2, 4, 8, 16]
    d2 = [d2_delta(m, a.rho, a.rho1, d) for d in deltas]
    out["d2_scan"] = {"delta": deltas, "d2": d2, "decreasing": all(x > y for x, y in zip(d2, d2[1:]))}
    r1, per = rho0_scan(m, a.rho_tilde)
    out["rho0_scan"] = {"rho_tilde": a.rho_tilde, "first_rho1": r1,
                        "per_rho1": {str(k): {"satisfied": r.satisfied,
                                              "edge_ok": r.details.get("edge_ok"),
                                              "d1_tilde": r.details.get("d1_tilde")} for k, r in per.items()}}
    print(json.dumps(out, indent=2, default=float))


if __name__ == "__main__":
    main()
