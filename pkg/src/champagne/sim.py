"""Monte Carlo estimation of truncated hitting probabilities.

Estimates P^x[T_A < T_exit] for the union A of a ball configuration and the
exit time from B(0, outer_M), for Brownian motion (walk-on-spheres) and
isotropic alpha-stable processes (jump-adapted walk built from the exact
ball exit law).  Both walks are exact in law up to the absorption tolerance;
time-stepping is provided only as a cross-check oracle because landing-only
hit detection is biased for continuous paths.

Reproducibility contract: trials are partitioned into fixed-size blocks and
each block draws from its own counter-based Philox stream keyed by
(seed, block index).  Estimates are therefore bit-identical regardless of
execution order or the number of worker threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import norm as _norm

from .config import BallIndex, truncate_config
from .errors import SimulationError

__all__ = [
    "ProcessSpec",
    "HittingEstimate",
    "wilson_interval",
    "wos_trial_brownian",
    "stable_trial",
    "stable_exit_sample",
    "stable_increment_exit_sample",
    "estimate_hitting",
    "estimate_shell_hitting",
    "ProbeRow",
    "ProbeReport",
    "verdict_probe",
]

BLOCK_SIZE = 65536  # trials per RNG stream; fixed so partitioning never affects results
MAX_STEPS_DEFAULT = 10**7
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ProcessSpec:
    """The simulated process: Brownian motion or an isotropic stable process.

    Transience requires the stability index to stay below the dimension,
    which for Brownian motion (index 2) means d >= 3.
    """

    kind: str
    d: int
    alpha: Optional[float] = None

    def __post_init__(self):
        if self.kind == "brownian":
            if self.alpha is not None:
                raise SimulationError("brownian process takes no alpha")
            if self.d < 3:
                raise SimulationError("brownian process is transient only for d >= 3")
        elif self.kind == "stable":
            if self.alpha is None or not (0 < self.alpha < 2):
                raise SimulationError("stable process requires alpha in (0, 2)")
            if not self.alpha < self.d:
                raise SimulationError("transience requires alpha < d")
        else:
            raise SimulationError(f"unknown process kind {self.kind!r}")


def wilson_interval(successes, trials, confidence=0.95):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return (0.0, 1.0)
    z = _norm.ppf(0.5 + confidence / 2.0)
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    margin = (z / denom) * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    lo = 0.0 if successes == 0 else max(0.0, center - margin)
    hi = 1.0 if successes == trials else min(1.0, center + margin)
    return (lo, hi)


@dataclass(frozen=True)
class HittingEstimate:
    """A truncated hitting-probability estimate with its provenance.

    The estimated quantity is P^x[T_A < T_exit], a lower bound for the
    untruncated hitting probability of the full (possibly infinite) family.
    """

    p_hat: float
    trials: int
    ci_low: float
    ci_high: float
    hits: int
    exits: int
    timeouts: int
    seed: int
    outer_M: float
    tol: float
    valid: bool

    def __post_init__(self):
        if self.hits + self.exits + self.timeouts != self.trials:
            raise SimulationError("hits + exits + timeouts must equal trials")
        if not (self.ci_low <= self.p_hat <= self.ci_high):
            raise SimulationError("point estimate must lie inside its confidence interval")

    @property
    def std_error(self):
        return math.sqrt(max(self.p_hat * (1 - self.p_hat), 1e-300) / self.trials)

    def to_json(self):
        return {
            "p_hat": self.p_hat,
            "ci": [self.ci_low, self.ci_high],
            "trials": self.trials,
            "hits": self.hits,
            "exits": self.exits,
            "timeouts": self.timeouts,
            "seed": self.seed,
            "outer_M": self.outer_M,
            "tol": self.tol,
            "valid": self.valid,
        }


# ---------------------------------------------------------------------------
# targets and RNG streams
# ---------------------------------------------------------------------------


class _BallsTarget:
    """Distance to the union of balls (negative inside a ball)."""

    def __init__(self, config):
        self.index = BallIndex(config.centers, config.radii)
        self.min_radius = float(config.radii.min()) if len(config) else None

    def distance(self, X):
        return self.index.surface_distance(X)


class _LatticeTarget:
    """Obstacle distance for lattice-generated configurations, in closed form.

    Candidate centers are the 3^d lattice neighbors of the query point
    (projected onto the extent ball); any ball outside that box is provably
    at least ``clip_bound`` away, so the returned value is
    min(exact local distance, clip_bound): a valid sphere radius everywhere
    and the exact distance whenever it is below clip_bound, in particular
    wherever absorption can trigger.
    """

    def __init__(self, config):
        from .config import RADIUS_CLIP_FACTOR

        self.s = float(config.spacing)
        self.extent = float(config.extent)
        self.profile = config.profile
        self.cap = RADIUS_CLIP_FACTOR * self.s
        self.limit_sq = (self.extent / self.s) ** 2 * (1 + 1e-12)
        d = config.d
        axes = np.array([-1.0, 0.0, 1.0])
        self.offsets = np.stack(
            np.meshgrid(*([axes] * d), indexing="ij"), axis=-1
        ).reshape(-1, d)
        self.clip_bound = 1.5 * self.s - self.cap
        self.min_radius = float(config.radii.min()) if len(config) else None

    def distance(self, X):
        X = np.atleast_2d(X)
        norms = np.linalg.norm(X, axis=1)
        far = norms >= self.extent + self.s
        out = np.empty(len(X))
        out[far] = norms[far] - self.extent - self.cap
        near = ~far
        if near.any():
            A = X[near]
            scale = np.minimum(1.0, self.extent / np.maximum(norms[near], 1e-300))
            n0 = np.round(A * scale[:, None] / self.s)
            cand = n0[:, None, :] + self.offsets[None, :, :]
            sq = np.einsum("ijk,ijk->ij", cand, cand)
            valid = (sq > 0) & (sq <= self.limit_sq)
            cnorm = np.sqrt(np.where(valid, sq, 1.0)) * self.s
            radii = np.minimum(self.profile.radius(cnorm), self.cap)
            diff = A[:, None, :] - cand * self.s
            surf = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff)) - radii
            best = np.where(valid, surf, np.inf).min(axis=1)
            out[near] = np.minimum(best, self.clip_bound)
        return out


def _make_target(config):
    if config.generator == "lattice" and config.profile is not None and config.spacing:
        return _LatticeTarget(config)
    return _BallsTarget(config)


class _ShellTarget:
    """Distance to the closed annulus rho <= |y| <= 3 rho (zero inside)."""

    def __init__(self, rho):
        self.rho = float(rho)
        self.min_radius = float(rho)

    def distance(self, X):
        n = np.linalg.norm(X, axis=1)
        return np.maximum(np.maximum(self.rho - n, n - 3.0 * self.rho), 0.0)


def _block_rng(seed, block):
    key = np.array([seed & _MASK64, block & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _derive_seed(seed, index):
    """Independent 64-bit sub-seed for row `index` of a multi-run report."""
    ss = np.random.SeedSequence([int(seed) & _MASK64, int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


def _unit_vectors(rng, m, d):
    u = rng.standard_normal((m, d))
    u /= np.maximum(np.linalg.norm(u, axis=1, keepdims=True), 1e-300)
    return u


def _exit_radius_factor(alpha, rng, m):
    """Exit radius of the stable process from the unit ball, started at the center.

    The squared reciprocal radius is Beta(alpha/2, 1 - alpha/2); its complement
    V is sampled so that radii just above 1 keep full float resolution (for
    alpha near 2 the exit concentrates on the sphere and plain Beta sampling
    would produce an atom at exactly 1).
    """
    v = rng.beta(1.0 - alpha / 2.0, alpha / 2.0, size=m)
    # v rounding to exactly 1 would give an infinite radius; cap the factor at 1e8
    return np.exp(-0.5 * np.log1p(-np.minimum(v, 1.0 - 1e-16)))


# ---------------------------------------------------------------------------
# walk engines (vectorized over a block of trials)
# ---------------------------------------------------------------------------


def _wos_block(target, x0, outer_M, tol, rng, n, max_steps):
    """Walk-on-spheres for Brownian motion: returns (hits, exits, timeouts).

    The active set is compacted every iteration (finished walkers only update
    integer counts), which keeps the long tail of slow walkers cheap.
    """
    d = len(x0)
    X = np.tile(np.asarray(x0, dtype=float), (n, 1))
    hits = exits = 0
    steps = 0
    while len(X) and steps < max_steps:
        d_target = target.distance(X)
        d_outer = outer_M - np.linalg.norm(X, axis=1)
        hit = d_target <= tol
        exited = ~hit & (d_outer <= tol)
        done = hit | exited
        if done.any():
            hits += int(hit.sum())
            exits += int(exited.sum())
            keep = ~done
            X, d_target, d_outer = X[keep], d_target[keep], d_outer[keep]
        if len(X):
            step_r = np.minimum(d_target, d_outer)
            X += step_r[:, None] * _unit_vectors(rng, len(X), d)
        steps += 1
    return hits, exits, len(X)


def _stable_block(target, x0, outer_M, alpha, tol, rng, n, max_steps):
    """Jump-adapted stable walk: maximal target-avoiding balls, exact exit law.

    The jump from the center of B(x, rho) lands at radius rho / sqrt(W) with
    W ~ Beta(alpha/2, 1 - alpha/2) and uniform direction.  Landing inside a
    ball counts as a hit (checked before the outer test); landing outside
    B(0, outer_M) is an exit; jumps are never capped by the outer boundary.
    """
    d = len(x0)
    X = np.tile(np.asarray(x0, dtype=float), (n, 1))
    hits = exits = 0
    steps = 0
    while len(X) and steps < max_steps:
        d_target = target.distance(X)
        hit = d_target <= tol
        exited = ~hit & (np.linalg.norm(X, axis=1) >= outer_M)
        done = hit | exited
        if done.any():
            hits += int(hit.sum())
            exits += int(exited.sum())
            keep = ~done
            X, d_target = X[keep], d_target[keep]
        if len(X):
            radii = d_target * _exit_radius_factor(alpha, rng, len(X))
            X += radii[:, None] * _unit_vectors(rng, len(X), d)
        steps += 1
    return hits, exits, len(X)


def _outcome_name(counts):
    hits, exits, timeouts = counts
    if hits:
        return "hit"
    if exits:
        return "exit"
    return "timeout"


def wos_trial_brownian(config, x0, outer_M, tol, rng, max_steps=MAX_STEPS_DEFAULT):
    """One walk-on-spheres trial; returns 'hit', 'exit' or 'timeout'.

    A start inside a ball is an immediate hit.  Exact in law for Brownian
    motion up to the tol-absorption bias.
    """
    if tol <= 0:
        raise SimulationError("absorption tolerance must be positive")
    return _outcome_name(_wos_block(_BallsTarget(config), x0, outer_M, tol, rng, 1, max_steps))


def stable_trial(config, x0, outer_M, alpha, tol, rng, max_steps=MAX_STEPS_DEFAULT):
    """One jump-adapted stable trial; returns 'hit', 'exit' or 'timeout'."""
    if tol <= 0:
        raise SimulationError("absorption tolerance must be positive")
    if not (0 < alpha < 2 and alpha < config.d):
        raise SimulationError("stable trials require 0 < alpha < 2 and alpha < d")
    return _outcome_name(
        _stable_block(_BallsTarget(config), x0, outer_M, alpha, tol, rng, 1, max_steps)
    )


# ---------------------------------------------------------------------------
# exact stable exit law from a ball
# ---------------------------------------------------------------------------


def stable_exit_sample(x, r, alpha, d, rng, size=None, max_proposals=10**6):
    """Sample exit points of the isotropic alpha-stable process from B(0, r).

    Starting at the center, the exit radius is r / sqrt(W) with
    W ~ Beta(alpha/2, 1 - alpha/2) and the direction uniform (the radial CDF
    of the known exit density in closed form).  Off-center starts are drawn
    by rejection from the center law against the exit density

        p(y) ~ (r^2 - |x|^2)^(alpha/2) (|y|^2 - r^2)^(-alpha/2) |x - y|^(-d),

    whose ratio to the proposal is bounded by (1 - |x|/r)^(-d).
    """
    if not (0 < alpha < 2):
        raise SimulationError(f"alpha must lie in (0, 2), got {alpha}")
    x = np.asarray(x, dtype=float)
    if x.shape != (d,):
        raise SimulationError(f"start point must have dimension {d}")
    nx = float(np.linalg.norm(x))
    if nx >= r:
        raise SimulationError("start point must lie strictly inside the ball")
    n = 1 if size is None else int(size)

    def propose(m):
        radii = r * _exit_radius_factor(alpha, rng, m)
        return radii[:, None] * _unit_vectors(rng, m, d)

    if nx == 0.0:
        out = propose(n)
        return out[0] if size is None else out

    xt = x / r
    collected = []
    total = got = 0
    while got < n:
        m = min(max(4 * (n - got), 64), 1 << 18)
        if total + m > max_proposals:
            m = max_proposals - total
            if m <= 0:
                raise SimulationError(
                    f"rejection sampler exhausted {max_proposals} proposals "
                    f"(start too close to the boundary: |x|/r = {nx / r:.4f})"
                )
        y = propose(m) / r
        accept_p = ((1.0 - nx / r) * np.linalg.norm(y, axis=1)
                    / np.linalg.norm(y - xt, axis=1)) ** d
        keep = rng.uniform(size=m) < accept_p
        if keep.any():
            collected.append(y[keep] * r)
            got += int(keep.sum())
        total += m
    out = np.concatenate(collected)[:n]
    return out[0] if size is None else out


def _kanter_one_sided_stable(a, rng, size):
    """One-sided stable variates (index a in (0,1)), Laplace transform exp(-s^a)."""
    u = rng.uniform(0.0, math.pi, size)
    e = rng.exponential(1.0, size)
    kanter_a = np.sin(a * u) ** (a / (1 - a)) * np.sin((1 - a) * u) / np.sin(u) ** (1 / (1 - a))
    return (kanter_a / e) ** ((1 - a) / a)


def stable_increment_exit_sample(r, alpha, d, dt, rng, size, x0=None):
    """Cross-check oracle: time-stepped exit points from B(0, r).

    Uses the subordinate-Brownian composition (Gaussian step scaled by a
    one-sided stable(alpha/2) subordinator increment over dt).  Hit detection
    is landing-only, so the law carries an O(dt) bias; for validating the
    exact exit sampler only, never for estimates.
    """
    if not (0 < alpha < 2):
        raise SimulationError("alpha must lie in (0, 2)")
    X = np.zeros((size, d)) if x0 is None else np.tile(np.asarray(x0, dtype=float), (size, 1))
    out = np.empty((size, d))
    active = np.arange(size)
    scale = dt ** (2.0 / alpha)
    while len(active):
        s = scale * _kanter_one_sided_stable(alpha / 2.0, rng, len(active))
        X[active] += np.sqrt(s)[:, None] * rng.standard_normal((len(active), d))
        outside = np.linalg.norm(X[active], axis=1) > r
        done = active[outside]
        out[done] = X[done]
        active = active[~outside]
    return out


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------


def _default_threads():
    env = os.environ.get("CHAMPAGNE_THREADS")
    return max(1, int(env)) if env else 1


def _run_blocks(engine, target, x0, outer_M, extra_args, tol, seed, trials, threads, max_steps):
    sizes = [BLOCK_SIZE] * (trials // BLOCK_SIZE)
    if trials % BLOCK_SIZE:
        sizes.append(trials % BLOCK_SIZE)

    def one(block_idx):
        rng = _block_rng(seed, block_idx)
        return engine(target, x0, outer_M, *extra_args, tol, rng, sizes[block_idx], max_steps)

    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, range(len(sizes))))
    else:
        results = [one(i) for i in range(len(sizes))]
    hits = sum(r[0] for r in results)
    exits = sum(r[1] for r in results)
    timeouts = sum(r[2] for r in results)
    return hits, exits, timeouts


def _make_estimate(counts, trials, seed, outer_M, tol):
    hits, exits, timeouts = counts
    p_hat = hits / trials
    lo, hi = wilson_interval(hits, trials)
    return HittingEstimate(
        p_hat=p_hat,
        trials=trials,
        ci_low=lo,
        ci_high=hi,
        hits=hits,
        exits=exits,
        timeouts=timeouts,
        seed=int(seed),
        outer_M=float(outer_M),
        tol=float(tol),
        valid=timeouts < 0.01 * trials,
    )


def _resolve(process, target, x0, outer_M, trials, tol):
    if trials < 100:
        raise SimulationError("need at least 100 trials")
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (process.d,):
        raise SimulationError(f"start point must have dimension {process.d}")
    if np.linalg.norm(x0) >= outer_M:
        raise SimulationError("start point must lie inside the truncation ball")
    if tol is None:
        tol = 1e-6 * (target.min_radius if target.min_radius is not None else 1.0)
    if tol <= 0:
        raise SimulationError("absorption tolerance must be positive")
    if target.distance(x0[None, :])[0] <= tol:
        raise SimulationError("start point must lie outside the target set")
    if process.kind == "brownian":
        return x0, float(tol), _wos_block, ()
    return x0, float(tol), _stable_block, (process.alpha,)


def estimate_hitting(process, config, x0, outer_M, trials, seed, tol=None,
                     threads=None, max_steps=MAX_STEPS_DEFAULT):
    """Estimate P^x[T_A < T_exit] over `trials` independent walks.

    Deterministic given (seed, trials, parameters); identical results for any
    thread count.  Estimates with more than 1% timeouts are flagged invalid.
    """
    if config.d != process.d:
        raise SimulationError("process and configuration dimensions differ")
    if process.kind == "stable" and not process.alpha < config.d:
        raise SimulationError("transience requires alpha < d")
    trials = int(trials)
    target = _make_target(config)
    x0, tol, engine, extra = _resolve(process, target, x0, outer_M, trials, tol)
    threads = _default_threads() if threads is None else max(1, int(threads))
    counts = _run_blocks(engine, target, x0, outer_M, extra, tol, seed, trials, threads, max_steps)
    return _make_estimate(counts, trials, seed, outer_M, tol)


def estimate_shell_hitting(process, rho, outer_M, trials, seed, x0=None, tol=None,
                           threads=None, max_steps=MAX_STEPS_DEFAULT):
    """Estimate P^x[T_shell < T_exit] for the closed annulus rho <= |y| <= 3 rho.

    Entry into the shell region is the hit event: the walk absorbs when its
    distance to the annulus falls below tol (for Brownian motion the spheres
    are automatically capped by that distance).
    """
    if rho <= 0:
        raise SimulationError("rho must be positive")
    trials = int(trials)
    x0 = np.zeros(process.d) if x0 is None else np.asarray(x0, dtype=float)
    target = _ShellTarget(rho)
    x0, tol, engine, extra = _resolve(process, target, x0, outer_M, trials, tol)
    threads = _default_threads() if threads is None else max(1, int(threads))
    counts = _run_blocks(engine, target, x0, outer_M, extra, tol, seed, trials, threads, max_steps)
    return _make_estimate(counts, trials, seed, outer_M, tol)


# ---------------------------------------------------------------------------
# verdict probing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeRow:
    label: str
    x0: tuple
    extent: float
    outer_M: float
    estimate: HittingEstimate

    def to_json(self):
        out = {"label": self.label, "x0": list(self.x0), "extent": self.extent,
               "outer_M": self.outer_M}
        out.update(self.estimate.to_json())
        return out


@dataclass(frozen=True)
class ProbeReport:
    rows: tuple
    ci_decreasing: bool
    nondecreasing: bool

    def to_json(self):
        return {
            "rows": [row.to_json() for row in self.rows],
            "ci_decreasing": self.ci_decreasing,
            "nondecreasing": self.nondecreasing,
        }

    def to_csv(self, path):
        import csv

        fields = ["label", "x0", "extent", "outer_M", "p_hat", "ci_low", "ci_high",
                  "trials", "hits", "exits", "timeouts", "seed"]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(fields)
            for row in self.rows:
                e = row.estimate
                writer.writerow([
                    row.label, " ".join(f"{v:.17g}" for v in row.x0),
                    f"{row.extent:.17g}", f"{row.outer_M:.17g}", f"{e.p_hat:.17g}",
                    f"{e.ci_low:.17g}", f"{e.ci_high:.17g}", e.trials, e.hits,
                    e.exits, e.timeouts, e.seed,
                ])


def _trend_flags(rows):
    if len(rows) < 2:
        return (False, True)
    ci_dec = all(
        rows[i + 1].estimate.ci_high < rows[i].estimate.ci_low for i in range(len(rows) - 1)
    )
    nondec = all(
        rows[i + 1].estimate.p_hat >= rows[i].estimate.p_hat for i in range(len(rows) - 1)
    )
    return (ci_dec, nondec)


def verdict_probe(process, config, probe_points, outer_M, trials, seed, extents=None,
                  tol=None, threads=None):
    """Estimate hitting probabilities along a family of probes.

    Two modes: distinct start points against the fixed configuration
    (avoidable verdicts should show estimates decreasing toward zero), or a
    fixed start with growing truncation extents, outer_M defaulting to
    3 * extent (unavoidable verdicts should show estimates rising toward
    one).  Each row uses an independent sub-seed derived from (seed, row).
    """
    rows = []
    if extents is not None:
        x0 = np.zeros(process.d) if not len(probe_points) else np.asarray(probe_points[0], float)
        for i, ext in enumerate(extents):
            sub = truncate_config(config, ext)
            oM = 3.0 * ext if outer_M is None else outer_M
            est = estimate_hitting(process, sub, x0, oM, trials, _derive_seed(seed, i),
                                   tol=tol, threads=threads)
            rows.append(ProbeRow(label=f"extent={ext:g}", x0=tuple(x0), extent=float(ext),
                                 outer_M=float(oM), estimate=est))
    else:
        pts = [np.asarray(p, dtype=float) for p in probe_points]
        if len({p.shape for p in pts} | {(process.d,)}) > 1:
            raise SimulationError("probe points must all have the process dimension")
        if len(pts) != len({tuple(p) for p in pts}):
            raise SimulationError("probe points must be pairwise distinct")
        for i, p in enumerate(pts):
            est = estimate_hitting(process, config, p, outer_M, trials,
                                   _derive_seed(seed, i), tol=tol, threads=threads)
            rows.append(ProbeRow(label=f"|x0|={np.linalg.norm(p):g}", x0=tuple(p),
                                 extent=config.extent, outer_M=float(outer_M), estimate=est))
    ci_dec, nondec = _trend_flags(rows)
    return ProbeReport(rows=tuple(rows), ci_decreasing=ci_dec, nondecreasing=nondec)
