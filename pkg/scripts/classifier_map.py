"""Verdict map over a 2-D parameter grid.

Writes one CSV row per grid point with the verdict and the matched theorem
labels, then prints the verdict counts. The default grid varies the two
diffusion exponents around the band of the cooperative base model.

    python3 scripts/classifier_map.py --params scripts/params/band.json \
        --x r11=1.2:2.8:33 --y r21=1.2:2.8:33 --out results/classifier_map.csv
"""
import argparse
from collections import Counter
from pathlib import Path

from mecsbp.cli import atomic_write, fmt, parse_vary
from mecsbp.criteria import classify
from mecsbp.errors import MecsbpError
from mecsbp.model import load_params, validate
from mecsbp.montecarlo import axis_values

HERE = Path(__file__).parent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--params", default=str(HERE / "params" / "band.json"))
    ap.add_argument("--x", default="r11=1.2:2.8:33", help="name=from:to:steps[:scale]")
    ap.add_argument("--y", default="r21=1.2:2.8:33")
    ap.add_argument("--out", default="results/classifier_map.csv")
    a = ap.parse_args()

    base = load_params(a.params)
    (nx, *gx), (ny, *gy) = parse_vary(a.x), parse_vary(a.y)
    rows, counts = [], Counter()
    for vx in axis_values(*gx):
        for vy in axis_values(*gy):
            try:
                rep = classify(validate(base.with_(**{nx: vx, ny: vy})), record=False)
                v, matched = rep.verdict, ";".join(rep.matched)
            except MecsbpError as e:
                v, matched = "invalid", str(e).replace(",", " ")
            counts[v] += 1
            rows.append(f"{fmt(vx)},{fmt(vy)},{v},{matched}")
    Path(a.out).parent.mkdir(parents=True, exist_ok=True)
    atomic_write(a.out, "\n".join([f"{nx},{ny},verdict,matched"] + rows) + "\n")
    for k, c in sorted(counts.items()):
        print(f"{k:24s} {c}")
    print(f"wrote {a.out}")


if __name__ == "__main__":
    main()
