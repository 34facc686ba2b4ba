"""Command-line entry point: classify, simulate, sweep, verify-generator, ineq, stable-check.

Exit codes: 0 success, 1 domain or configuration error, 2 internal error.
Data goes to files or stdout, diagnostics to stderr.
"""

import argparse
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .errors import ConsistencyError, MecsbpError

CSV_PATH_HEADER = ("path_id", "status", "t_end", "x_end", "y_end")
CSV_SWEEP_TAIL = ("verdict", "n_paths", "n_extinct", "n_exploded", "n_survived", "p_hat", "ci_lo",
                  "ci_hi", "mean_t_extinct")


class UsageError(MecsbpError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(v):
    """Nine significant digits for floats; empty for None."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".9g")
    return str(v)


def atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def _emit(text, out):
    if out:
        atomic_write(out, text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json(obj):
    return json.dumps(obj, indent=2, default=_jsonable)


def _jsonable(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serialisable: {type(o).__name__}")


# ------------------------------------------------------------- commands

def _load(path):
    from .model import load_params
    return load_params(path)


def _sim_config(a):
    from .simulator import SimConfig
    from .stablejump import CutoffScheme
    return SimConfig(dt=a.dt, t_max=a.t_max, eps_extinct=a.eps_extinct, cap_explode=a.cap_explode,
                     cutoff=CutoffScheme(a.eps_jump, not a.no_gaussian), seed=a.seed,
                     diffusion_form=a.diffusion_form)


def _mc_config(a):
    from .montecarlo import McConfig
    return McConfig(n_paths=a.paths, sim=_sim_config(a), workers=a.workers, x0=a.x0, y0=a.y0)


def cmd_classify(a):
    from .criteria import classify
    from .model import params_to_json
    p = _load(a.params)
    rep = classify(p)
    if a.echo_params:
        atomic_write(a.echo_params, params_to_json(p) + "\n")
    _emit(rep.table() if a.table else rep.to_json(), a.out)
    return 0


def cmd_simulate(a):
    from .montecarlo import run_paths, summarize
    p = _load(a.params)
    cfg = _mc_config(a)
    outs = run_paths(p, cfg)
    rows = [(k, o.status, o.t_end, o.x_end, o.y_end) for k, o in enumerate(outs)]
    if a.out:
        atomic_write(a.out, _csv_text(CSV_PATH_HEADER, rows))
    sys.stdout.write(_json(summarize(outs).to_dict()) + "\n")
    return 0


def parse_vary(spec):
    """name=from:to:steps[:scale] -> (name, from, to, steps, scale)."""
    from .errors import ConfigError
    try:
        name, rng = spec.split("=", 1)
        parts = rng.split(":")
        if len(parts) not in (3, 4):
            raise ValueError
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
        scale = parts[3] if len(parts) == 4 else "lin"
    except ValueError:
        raise ConfigError(f"bad --vary spec {spec!r}; expected name=from:to:steps[:scale]") from None
    return name.strip(), lo, hi, steps, scale


def cmd_sweep(a):
    from .errors import ConfigError
    from .montecarlo import sweep
    p = _load(a.params)
    axes = [parse_vary(v) for v in a.vary]
    if len(axes) > 2:
        raise ConfigError("at most two --vary axes")
    rows = sweep(p, axes[0], _mc_config(a), axes[1] if len(axes) > 1 else None)
    names = [ax[0] for ax in axes]
    header = names + list(CSV_SWEEP_TAIL)
    table = [[r.get(k) for k in header] for r in rows]
    for r in rows:
        if r["verdict"] == "invalid":
            print(f"skipped {', '.join(f'{n}={fmt(r[n])}' for n in names)}: {r['error']}", file=sys.stderr)
    _emit(_csv_text(header, table), a.out)
    return 0


def cmd_verify(a):
    from .generator import linearcap_scan, verify_drift_bound
    from .testfunctions import LinearCap, make_test_function
    p = _load(a.params)
    extra = {}
    if a.family == "LinearCap" and a.scan:
        s = linearcap_scan(p, a.rho)
        tf = LinearCap(v=s.v, rho=s.rho)
        c = s.v if a.c is None else a.c
        extra = {"scan": {"rho": s.rho, "v": s.v, "d": s.d, "c1": s.c1, "k": s.k}}
    else:
        kw = json.loads(a.tf_params) if a.tf_params else {}
        tf = make_test_function(a.family, **kw)
        c = 1.0 if a.c is None else a.c
    rep = verify_drift_bound(tf, p, c, a.direction, n=a.n, decades=a.decades, mode=a.mode,
                             constant=a.constant)
    d = rep.to_dict()
    d.update(extra)
    _emit(_json(d), a.out)
    return 0 if rep.satisfied or not a.strict else 1


def cmd_ineq(a):
    from . import ineqlab
    from .stablejump import StableMeasure
    rng = np.random.default_rng(a.seed)
    kw = json.loads(a.args) if a.args else {}
    if a.kind == "young":
        rep = ineqlab.young_check(a.variant, kw or None, a.trials, rng)
    elif a.kind == "box":
        rep = ineqlab.find_box_constant(a.lemma, kw["exponents"], kw["coefficients"])
    elif a.kind == "delta0":
        rep = ineqlab.find_delta0(a.lemma, _load(a.params), trials=a.trials, rng=rng, **kw)
    else:
        v = np.linspace(0.1, 1.0, 10) if "v_grid" not in kw else np.asarray(kw["v_grid"], float)
        rep = ineqlab.kvz_bounds_check(StableMeasure(kw.get("alpha", 1.5)), kw.get("rho1", 2.0),
                                       kw.get("rho", 0.25), v, mode=a.variant or "lemma_ii",
                                       delta=kw.get("delta", 8.0))
    _emit(_json(rep.to_dict()), a.out)
    return 0


def cmd_stable(a):
    from .stablejump import CutoffScheme, StableMeasure, laplace_check
    rep = laplace_check(StableMeasure(a.alpha), a.lam, a.dt, CutoffScheme(a.eps, not a.no_gaussian),
                        a.u, a.paths, np.random.default_rng(a.seed))
    _emit(_json(rep), a.out)
    return 0


# --------------------------------------------------------------- parser

def _sim_flags(sp, paths_default):
    sp.add_argument("--params", required=True)
    sp.add_argument("--x0", type=float, default=1.0)
    sp.add_argument("--y0", type=float, default=1.0)
    sp.add_argument("--paths", type=int, default=paths_default)
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--t-max", type=float, default=5.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--eps-extinct", type=float, default=1e-8)
    sp.add_argument("--cap-explode", type=float, default=1e12)
    sp.add_argument("--eps-jump", type=float, default=1e-3)
    sp.add_argument("--no-gaussian", action="store_true", help="drop the Gaussian small-jump completion")
    sp.add_argument("--diffusion-form", choices=("sde", "generator"), default="sde")
    sp.add_argument("--workers", type=_workers, default="auto")
    sp.add_argument("--out")


def _workers(s):
    if s == "auto":
        return s
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("workers must be >= 1")
    return v


def build_parser():
    ap = _Parser(prog="mecsbp", description="Extinction classifier, simulator and numerical checks "
                                            "for a two-type nonlinear branching system with stable jumps.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    sp = sub.add_parser("classify", help="evaluate every theorem's hypotheses and give a verdict")
    sp.add_argument("--params", required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="JSON report (default)")
    g.add_argument("--table", action="store_true", help="aligned text table")
    sp.add_argument("--echo-params", metavar="PATH", help="also write the parsed parameters as JSON")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("simulate", help="simulate paths; per-path CSV and a summary on stdout")
    _sim_flags(sp, 1000)
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("sweep", help="extinction frequency over a parameter grid")
    _sim_flags(sp, 500)
    sp.add_argument("--vary", action="append", required=True, metavar="NAME=FROM:TO:STEPS[:SCALE]")
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("verify-generator", help="certify a drift bound on a grid")
    sp.add_argument("--params", required=True)
    sp.add_argument("--family", required=True)
    sp.add_argument("--tf-params", help="JSON object of family parameters")
    sp.add_argument("--scan", action="store_true", help="LinearCap: find v and rho by the scan")
    sp.add_argument("--rho", type=float)
    sp.add_argument("--c", type=float, help="box side (default 1, or v with --scan)")
    sp.add_argument("--direction", choices=("upper", "lower"), default="upper")
    sp.add_argument("--constant", type=float)
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--decades", type=float, default=6.0)
    sp.add_argument("--mode", choices=("auto", "closed", "numeric"), default="auto")
    sp.add_argument("--strict", action="store_true", help="exit 1 when the bound is not satisfied")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("ineq", help="auxiliary inequality checks")
    sp.add_argument("--kind", choices=("young", "box", "delta0", "kvz"), required=True)
    sp.add_argument("--variant", help="young: i|ii_le1|ii_gt1|iii; kvz: lemma_i|lemma_ii")
    sp.add_argument("--lemma", help="box: 3.2|7.1; delta0: 5.1|5.2|5.3")
    sp.add_argument("--params")
    sp.add_argument("--args", help="JSON object with inputs for the chosen check")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_ineq)

    sp = sub.add_parser("stable-check", help="empirical vs analytic Laplace transform of jump increments")
    sp.add_argument("--alpha", type=float, default=1.5)
    sp.add_argument("--u", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    sp.add_argument("--dt", type=float, default=0.1)
    sp.add_argument("--lam", type=float, default=1.0)
    sp.add_argument("--paths", type=int, default=100_000)
    sp.add_argument("--eps", type=float, default=1e-4)
    sp.add_argument("--no-gaussian", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_stable)
    return ap


def run(argv=None):
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
        if a.cmd == "ineq":
            _check_ineq_args(a)
        return a.fn(a)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except ConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except (MecsbpError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def _check_ineq_args(a):
    if a.kind == "young" and not a.variant:
        raise UsageError("--variant is required for --kind young")
    if a.kind in ("box", "delta0") and not a.lemma:
        raise UsageError("--lemma is required for --kind box/delta0")
    if a.kind == "delta0" and not a.params:
        raise UsageError("--params is required for --kind delta0")


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
