"""Extinction estimate as a function of the extinction threshold.

With a shared seed the estimate can only grow with the threshold; the
curve shows how much of the reported probability depends on where the
boundary is cut.
"""
import argparse
from pathlib import Path

from mecsbp.cli import atomic_write, fmt
from mecsbp.model import load_params
from mecsbp.montecarlo import McConfig, sweep
from mecsbp.simulator import SimConfig

HERE = Path(__file__).parent
COLS = ["eps_extinct", "n_extinct", "p_hat", "ci_lo", "ci_hi", "mean_t_extinct"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--params", default=str(HERE / "params" / "extinction.json"))
    ap.add_argument("--lo", type=float, default=1e-12)
    ap.add_argument("--hi", type=float, default=1e-2)
    ap.add_argument("--steps", type=int, default=11)
    ap.add_argument("--paths", type=int, default=1000)
    ap.add_argument("--t-max", type=float, default=5.0)
    ap.add_argument("--dt", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/eps_sweep.csv")
    a = ap.parse_args()

    cfg = McConfig(n_paths=a.paths, sim=SimConfig(dt=a.dt, t_max=a.t_max, seed=a.seed))
    rows = sweep(load_params(a.params), ("eps_extinct", a.lo, a.hi, a.steps, "log"), cfg)
    lines = [",".join(COLS)] + [",".join(fmt(r[c]) for c in COLS) for r in rows]
    Path(a.out).parent.mkdir(parents=True, exist_ok=True)
    atomic_write(a.out, "\n".join(lines) + "\n")
    print("\n".join(lines))


if __name__ == "__main__":
    main()
