"""Parallel path ensembles, extinction-frequency estimates and parameter sweeps."""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from statistics import NormalDist

import numpy as np

from .criteria import classify
from .errors import ConfigError, ConstraintViolation, DomainError
from .model import PARAM_KEYS, validate
from .simulator import SimConfig, simulate_path

Z95 = NormalDist().inv_cdf(0.975)
SIM_AXES = ("eps_extinct", "cap_explode", "dt", "t_max")

CAVEAT = ("extinction is detected by crossing eps_extinct, not by hitting 0; "
          "the direction of the resulting bias depends on the regime")


@dataclass(frozen=True)
class McConfig:
    n_paths: int = 1000
    sim: SimConfig = field(default_factory=SimConfig)
    workers: object = "auto"
    x0: float = 1.0
    y0: float = 1.0

    def __post_init__(self):
        if not (isinstance(self.n_paths, (int, np.integer)) and self.n_paths >= 1):
            raise ConfigError("n_paths must be a positive integer")
        if self.workers != "auto" and not (isinstance(self.workers, int) and self.workers >= 1):
            raise ConfigError("workers must be a positive integer or 'auto'")

    def n_workers(self):
        if self.workers == "auto":
            return os.cpu_count() or 1
        return self.workers


@dataclass
class McEstimate:
    n_paths: int
    n_extinct: int
    n_exploded: int
    n_survived: int
    p_hat: float
    ci_lo: float
    ci_hi: float
    mean_t_extinct: object
    n_extinct_x: int = 0
    n_extinct_y: int = 0
    notes: list = field(default_factory=lambda: [CAVEAT])

    def to_dict(self):
        return asdict(self)


def wilson(k, n, z=Z95):
    """Wilson score interval for k successes in n trials."""
    if n <= 0:
        raise ConfigError("n must be positive")
    p = k / n
    z2 = z * z
    den = 1 + z2 / n
    centre = (p + z2 / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / den
    return max(0.0, min(centre - half, p)), min(1.0, max(centre + half, p))


def path_rng(seed, k):
    """Generator for path k; SeedSequence hashes (seed, k) into 128 bits of entropy."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(k)]))


def run_paths(p, cfg):
    """All PathOutcomes in path order; identical for any worker count."""
    n, sim = int(cfg.n_paths), cfg.sim
    out = [None] * n

    def work(lo, hi):
        for k in range(lo, hi):
            out[k] = simulate_path(cfg.x0, cfg.y0, p, sim, path_rng(sim.seed, k))

    w = max(1, min(cfg.n_workers(), n))
    if w == 1:
        work(0, n)
    else:
        chunk = max(1, math.ceil(n / (4 * w)))
        with ThreadPoolExecutor(max_workers=w) as ex:
            futs = [ex.submit(work, lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
            for f in futs:
                f.result()
    return out


def summarize(outcomes):
    n = len(outcomes)
    ex_x = sum(o.status == "ExtinctX" for o in outcomes)
    ex_y = sum(o.status == "ExtinctY" for o in outcomes)
    expl = sum(o.status == "Exploded" for o in outcomes)
    surv = n - ex_x - ex_y - expl
    k = ex_x + ex_y
    lo, hi = wilson(k, n)
    times = [o.t_end for o in outcomes if o.status.startswith("Extinct")]
    mean_t = math.fsum(times) / len(times) if times else None
    return McEstimate(n, k, expl, surv, k / n, lo, hi, mean_t, ex_x, ex_y)


def estimate_extinction_prob(p, cfg):
    return summarize(run_paths(p, cfg))


# ----------------------------------------------------------------- sweeps

def axis_values(lo, hi, steps, scale="lin"):
    steps = int(steps)
    if steps < 1:
        raise ConfigError("steps must be >= 1")
    if scale == "lin":
        return list(np.linspace(lo, hi, steps)) if steps > 1 else [float(lo)]
    if scale == "log":
        if not (lo > 0 and hi > 0):
            raise ConfigError("log axis needs positive bounds")
        return list(np.geomspace(lo, hi, steps)) if steps > 1 else [float(lo)]
    raise ConfigError(f"unknown scale {scale!r}")


def _check_name(name):
    if name not in PARAM_KEYS and name not in SIM_AXES:
        raise ConfigError(f"cannot vary {name!r}")


def sweep(base, axis, cfg, axis2=None):
    """One row per grid point: varied values, verdict and the McEstimate fields.

    Axes are (name, from, to, steps[, scale]); names may be model keys or
    one of the SimConfig fields in SIM_AXES. Points that fail validation are
    kept as rows with verdict "invalid" and an error note.
    """
    axes = [axis] + ([axis2] if axis2 is not None else [])
    grids = []
    for ax in axes:
        name, lo, hi, steps = ax[:4]
        scale = ax[4] if len(ax) > 4 else "lin"
        _check_name(name)
        grids.append((name, axis_values(float(lo), float(hi), steps, scale)))
    points = [[(grids[0][0], v)] for v in grids[0][1]]
    if len(grids) > 1:
        points = [pt + [(grids[1][0], w)] for pt in points for w in grids[1][1]]
    rows = []
    for pt in points:
        row = {name: float(v) for name, v in pt}
        try:
            pk = {n: float(v) for n, v in pt if n in PARAM_KEYS}
            sk = {n: float(v) for n, v in pt if n in SIM_AXES}
            pp = validate(base.with_(**pk))
            sim = replace(cfg.sim, **sk) if sk else cfg.sim
            est = estimate_extinction_prob(pp, replace(cfg, sim=sim))
        except (ConstraintViolation, ConfigError, DomainError) as exc:
            row.update(verdict="invalid", error=str(exc))
            rows.append(row)
            continue
        row["verdict"] = classify(pp, record=False).verdict
        row.update({k: v for k, v in est.to_dict().items() if k != "notes"})
        rows.append(row)
    return rows


__all__ = ["McConfig", "McEstimate", "wilson", "path_rng", "run_paths", "summarize",
           "estimate_extinction_prob", "sweep", "axis_values", "SIM_AXES"]
