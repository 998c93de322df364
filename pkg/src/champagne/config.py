"""Ball configurations and the avoidability classifier.

A configuration is a finite family of pairwise disjoint balls, optionally
backed by a decreasing radius profile r_z = phi(|z|).  The classifier decides
unavoidable / avoidable / inconclusive from the divergence class of the
weight sum  sum_z g(|z|)/g(r_z)  (equivalently the integral
int r^(d-1) g(r)/g(phi(r)) dr for regularly located families), the growth of
rho^d g(rho)/g(phi(rho)), and the separation condition.  Divergence of a tail
cannot be decided from finitely many balls, so verdicts are symbolic: they
are issued only for the closed profile/kernel families where the integrand's
power and log exponents are known; everything else is reported inconclusive
with numeric evidence.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .errors import ConfigError
from .kernel import Asym

__all__ = [
    "PowerLawProfile",
    "PowerLogProfile",
    "ConstantProfile",
    "BallConfig",
    "ball_config",
    "build_lattice_config",
    "truncate_config",
    "BallIndex",
    "SeparationReport",
    "separation_infimum",
    "RegularLocation",
    "check_regularly_located",
    "criterion_sum",
    "IntegralReport",
    "criterion_integral",
    "radius_growth_ratio",
    "growth_exponent",
    "integrand_exponent",
    "separation_exponent",
    "Label",
    "Rule",
    "Verdict",
    "classify",
    "profile_from_json",
    "profile_to_json",
    "config_from_json",
    "config_to_json",
]

_EXP_TOL = 1e-9  # tolerance for boundary comparisons of symbolic exponents


# ---------------------------------------------------------------------------
# radius profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerLawProfile:
    """phi(r) = a * r**(-beta)."""

    a: float
    beta: float
    gamma = 0.0

    def __post_init__(self):
        if self.a <= 0:
            raise ConfigError("profile scale a must be positive")
        if self.beta < 0:
            raise ConfigError("profile must be nonincreasing: beta >= 0")

    def radius(self, r):
        return self.a * np.asarray(r, dtype=float) ** (-self.beta)


@dataclass(frozen=True)
class PowerLogProfile:
    """phi(r) = a * r**(-beta) * log(e + r)**(-gamma)."""

    a: float
    beta: float
    gamma: float

    def __post_init__(self):
        if self.a <= 0:
            raise ConfigError("profile scale a must be positive")
        if self.beta < 0 or self.gamma < 0:
            raise ConfigError("profile must be nonincreasing: beta, gamma >= 0")

    def radius(self, r):
        r = np.asarray(r, dtype=float)
        return self.a * r ** (-self.beta) * np.log(math.e + r) ** (-self.gamma)


@dataclass(frozen=True)
class ConstantProfile:
    """phi(r) = a."""

    a: float
    beta = 0.0
    gamma = 0.0

    def __post_init__(self):
        if self.a <= 0:
            raise ConfigError("profile scale a must be positive")

    def radius(self, r):
        return np.full_like(np.asarray(r, dtype=float), self.a)


def profile_from_json(obj):
    kind = obj.get("type")
    if kind == "power":
        return PowerLawProfile(a=obj["a"], beta=obj["beta"])
    if kind == "powerlog":
        return PowerLogProfile(a=obj["a"], beta=obj["beta"], gamma=obj["gamma"])
    if kind == "constant":
        return ConstantProfile(a=obj["a"])
    raise ConfigError(f"unknown profile type {kind!r}")


def profile_to_json(profile):
    if isinstance(profile, PowerLawProfile):
        return {"type": "power", "a": profile.a, "beta": profile.beta}
    if isinstance(profile, PowerLogProfile):
        return {"type": "powerlog", "a": profile.a, "beta": profile.beta, "gamma": profile.gamma}
    if isinstance(profile, ConstantProfile):
        return {"type": "constant", "a": profile.a}
    raise ConfigError(f"cannot serialize profile {type(profile).__name__}")


# ---------------------------------------------------------------------------
# configurations
# ---------------------------------------------------------------------------

RADIUS_CLIP_FACTOR = 0.49  # generated radii are capped at this multiple of the spacing


@dataclass(frozen=True)
class BallConfig:
    """A finite family of disjoint balls B(z, r_z), immutable after creation."""

    centers: np.ndarray
    radii: np.ndarray
    d: int
    extent: float
    profile: object = None
    clipped_count: int = 0
    generator: Optional[str] = None
    spacing: Optional[float] = None

    def __post_init__(self):
        self.centers.setflags(write=False)
        self.radii.setflags(write=False)

    def __len__(self):
        return len(self.radii)

    def center_norms(self):
        return np.linalg.norm(self.centers, axis=1)


def _check_disjoint(centers, radii):
    n = len(radii)
    if n < 2:
        return
    r_max = float(radii.max())
    tree = cKDTree(centers)
    pairs = tree.query_pairs(2.0 * r_max * (1 + 1e-12), output_type="ndarray")
    if len(pairs):
        i, j = pairs[:, 0], pairs[:, 1]
        gap = np.linalg.norm(centers[i] - centers[j], axis=1) - (radii[i] + radii[j])
        bad = gap < -1e-12 * max(1.0, r_max)
        if bad.any():
            k = int(np.argmax(bad))
            raise ConfigError(
                f"balls {i[k]} and {j[k]} overlap: center distance "
                f"{np.linalg.norm(centers[i[k]] - centers[j[k]]):.6g} < sum of radii "
                f"{radii[i[k]] + radii[j[k]]:.6g}"
            )


def check_disjoint_bruteforce(centers, radii):
    """O(n^2) disjointness predicate; retained as the oracle for the indexed check."""
    n = len(radii)
    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(centers[i] - centers[j]) < radii[i] + radii[j] - 1e-12:
                return False
    return True


def ball_config(centers, radii, profile=None, extent=None, validate=True,
                generator=None, spacing=None, clipped_count=0):
    """Assemble and validate a BallConfig from raw arrays."""
    centers = np.ascontiguousarray(np.atleast_2d(np.asarray(centers, dtype=float)))
    radii = np.ascontiguousarray(np.asarray(radii, dtype=float).ravel())
    if centers.ndim != 2:
        raise ConfigError("centers must be an (n, d) array")
    n, d = centers.shape
    if len(radii) != n:
        raise ConfigError(f"{n} centers but {len(radii)} radii")
    norms = np.linalg.norm(centers, axis=1) if n else np.zeros(0)
    if validate and n:
        if not np.all(np.isfinite(centers)) or not np.all(np.isfinite(radii)):
            raise ConfigError("centers and radii must be finite")
        if np.any(radii <= 0):
            raise ConfigError("radii must be positive")
        if np.any(norms == 0.0):
            raise ConfigError("no center may sit at the origin")
        _check_disjoint(centers, radii)
        if profile is not None:
            expected = profile.radius(norms)
            if spacing is not None:
                expected = np.minimum(expected, RADIUS_CLIP_FACTOR * spacing)
            rel = np.abs(radii - expected) / np.maximum(np.abs(expected), 1e-300)
            if np.any(rel > 1e-12):
                k = int(np.argmax(rel))
                raise ConfigError(
                    f"radius {radii[k]:.17g} of ball {k} does not match the profile "
                    f"value {expected[k]:.17g} at |z|={norms[k]:.6g}"
                )
    if extent is None:
        extent = float(norms.max() + radii.max()) if n else 0.0
    return BallConfig(
        centers=centers,
        radii=radii,
        d=d,
        extent=float(extent),
        profile=profile,
        clipped_count=int(clipped_count),
        generator=generator,
        spacing=spacing,
    )


def build_lattice_config(d, spacing, profile, extent):
    """Balls centered on the scaled integer lattice inside |z| <= extent.

    Centers are spacing * (Z^d intersected with the closed ball of radius
    extent / spacing), origin excluded.  Radii come from the profile and are
    clipped to RADIUS_CLIP_FACTOR * spacing where they would overlap; clipping
    is reported through a warning and the config's ``clipped_count``.
    """
    if spacing <= 0:
        raise ConfigError("spacing must be positive")
    if extent < spacing:
        raise ConfigError("extent must be at least the spacing")
    m = int(math.floor(extent / spacing + 1e-9))
    axes = np.arange(-m, m + 1, dtype=np.int32)
    grid = np.stack(np.meshgrid(*([axes] * d), indexing="ij"), axis=-1).reshape(-1, d)
    sq = np.sum(grid.astype(np.int64) ** 2, axis=1)
    limit_sq = (extent / spacing) ** 2 * (1 + 1e-12)
    keep = (sq > 0) & (sq <= limit_sq)
    centers = grid[keep].astype(float) * spacing
    norms = np.linalg.norm(centers, axis=1)
    radii = np.asarray(profile.radius(norms), dtype=float)
    if np.any(~np.isfinite(radii)) or np.any(radii <= 0):
        raise ConfigError("profile must be positive and finite on the lattice radii")
    cap = RADIUS_CLIP_FACTOR * spacing
    clipped = int(np.count_nonzero(radii > cap))
    if clipped:
        warnings.warn(
            f"{clipped} radii exceeded {cap:g} and were clipped to keep the balls disjoint",
            stacklevel=2,
        )
        radii = np.minimum(radii, cap)
    return ball_config(
        centers,
        radii,
        profile=profile,
        extent=float(extent),
        generator="lattice",
        spacing=float(spacing),
        clipped_count=clipped,
        validate=False,  # disjoint by construction: radii < spacing / 2
    )


def truncate_config(config, extent):
    """Sub-configuration of balls with |z| <= extent."""
    keep = config.center_norms() <= extent * (1 + 1e-12)
    return ball_config(
        config.centers[keep],
        config.radii[keep],
        profile=config.profile,
        extent=float(extent),
        generator=config.generator,
        spacing=config.spacing,
        validate=False,
    )


class BallIndex:
    """Nearest-ball-surface distance queries over a fixed configuration.

    Backed by a k-d tree over the centers; the varying radii are handled by a
    guarded k-nearest search (exact: the candidate set is grown until the
    k-th center distance provably exceeds the best surface distance plus the
    maximum radius).  Small configurations use a direct distance matrix.
    """

    _DIRECT_LIMIT = 128

    def __init__(self, centers, radii):
        self.centers = np.asarray(centers, dtype=float)
        self.radii = np.asarray(radii, dtype=float)
        self.n = len(self.radii)
        self.r_max = float(self.radii.max()) if self.n else 0.0
        self._tree = cKDTree(self.centers) if self.n > self._DIRECT_LIMIT else None

    def surface_distance(self, points):
        """Signed distance from each point to the nearest ball surface.

        Negative inside a ball.  Returns +inf when the configuration is empty.
        Exact despite the varying radii: the nearest center gives an upper
        bound u, and any competing ball must have its center within u + r_max,
        so a ball query at that radius settles the minimum.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.n == 0:
            return np.full(len(pts), np.inf)
        if self._tree is None:
            diff = pts[:, None, :] - self.centers[None, :, :]
            dist = np.linalg.norm(diff, axis=2) - self.radii[None, :]
            return dist.min(axis=1)
        d1, i1 = self._tree.query(pts)
        out = d1 - self.radii[i1]
        neighborhoods = self._tree.query_ball_point(pts, out + self.r_max + 1e-12)
        for i, idx in enumerate(neighborhoods):
            if len(idx) > 1:
                idx = np.asarray(idx)
                surf = np.linalg.norm(pts[i] - self.centers[idx], axis=1) - self.radii[idx]
                out[i] = surf.min()
        return out

    def surface_distance_bruteforce(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.n == 0:
            return np.full(len(pts), np.inf)
        diff = pts[:, None, :] - self.centers[None, :, :]
        return (np.linalg.norm(diff, axis=2) - self.radii[None, :]).min(axis=1)


# ---------------------------------------------------------------------------
# symbolic exponent algebra
# ---------------------------------------------------------------------------


def _g_of_profile_asym(kernel, profile):
    """Asymptotics of g(phi(r)) as r -> inf: (Asym, has_loglog) or (None, False)."""
    beta, gamma = profile.beta, profile.gamma
    if beta == 0 and gamma == 0:
        return Asym(0.0, 0.0), False  # constant profile
    small = kernel.asym_small()
    if small is None:
        return None, False
    p0, q0 = small.power, small.log_power
    if beta > 0:
        # phi ~ a r^-beta log^-gamma, so log(1/phi) ~ beta log r
        return Asym(-beta * p0, q0 - gamma * p0), False
    # beta == 0, gamma > 0: phi decays like a log power; log(1/phi) ~ gamma loglog r
    return Asym(0.0, -gamma * p0), q0 != 0.0


def integrand_exponent(kernel, profile, d):
    """(power, log_power, has_loglog) of r^(d-1) g(r)/g(phi(r)) as r -> inf."""
    large = kernel.asym_large()
    gphi, loglog = _g_of_profile_asym(kernel, profile)
    if large is None or gphi is None:
        return None
    return (d - 1 + large.power - gphi.power, large.log_power - gphi.log_power, loglog)


def growth_exponent(kernel, profile, d):
    """(power, log_power, has_loglog) of rho^d g(rho)/g(phi(rho)) as rho -> inf."""
    res = integrand_exponent(kernel, profile, d)
    if res is None:
        return None
    return (res[0] + 1.0, res[1], res[2])


def separation_exponent(kernel, profile, d):
    """(power, log_power, has_loglog) of the nearest-neighbor separation term.

    For centers with bounded mutual distance the term behaves like
    r^-d * g(phi(r)) / g(r); separation holds iff this stays bounded below.
    """
    large = kernel.asym_large()
    gphi, loglog = _g_of_profile_asym(kernel, profile)
    if large is None or gphi is None:
        return None
    return (-d + gphi.power - large.power, gphi.log_power - large.log_power, loglog)


def _decide_integral(exps):
    """True = divergent, False = convergent, None = undecided."""
    if exps is None:
        return None
    power, logp, loglog = exps
    if power > -1 + _EXP_TOL:
        return True
    if power < -1 - _EXP_TOL:
        return False
    if loglog:
        return None
    # boundary power -1: integral behaves like int dr / (r log(r)^-logp)
    if logp > -1 - _EXP_TOL:
        return True
    return False


def _decide_bounded_below(exps):
    if exps is None:
        return None
    power, logp, loglog = exps
    if power > _EXP_TOL:
        return True
    if power < -_EXP_TOL:
        return False
    if loglog:
        return None
    return logp >= -_EXP_TOL


def _decide_unbounded_growth(exps):
    if exps is None:
        return None
    power, logp, loglog = exps
    if power > _EXP_TOL:
        return True
    if power < -_EXP_TOL:
        return False
    if loglog:
        return None
    return logp > _EXP_TOL


# ---------------------------------------------------------------------------
# numeric criteria
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeparationReport:
    infimum: float
    exponent: Optional[tuple]
    bounded_below: Optional[bool]
    note: str = ""


def separation_infimum(config, kernel):
    """Infimum over ordered pairs z != z' of (|z-z'|^d / |z|^d) g(r_z)/g(|z|).

    The quantity is increasing in |z - z'|, so the infimum over pairs is
    attained at each center's nearest neighbor; the scan is exact.  For
    profile-backed configurations the symbolic tail exponent is attached:
    the infimum over the full infinite family is positive iff the
    nearest-neighbor term does not decay.
    """
    if config.d != kernel.d:
        raise ConfigError("kernel and configuration dimensions differ")
    exps = separation_exponent(kernel, config.profile, config.d) if config.profile else None
    bounded = _decide_bounded_below(exps)
    if len(config) < 2:
        return SeparationReport(
            infimum=math.inf,
            exponent=exps,
            bounded_below=bounded,
            note="fewer than two balls: separation is vacuous",
        )
    tree = cKDTree(config.centers)
    nn = tree.query(config.centers, k=2)[0][:, 1]
    norms = config.center_norms()
    log_vals = (
        config.d * (np.log(nn) - np.log(norms))
        + kernel.log_g(np.log(config.radii))
        - kernel.log_g(np.log(norms))
    )
    return SeparationReport(
        infimum=float(np.exp(log_vals.min())),
        exponent=exps,
        bounded_below=bounded,
    )


@dataclass(frozen=True)
class RegularLocation:
    eps: float
    R: Optional[float]
    monotone: bool
    samples: int = 0

    def passes(self, extent=math.inf):
        return self.eps > 0 and self.R is not None and self.R < extent / 2 and self.monotone


def _covering_radius_estimate(centers, n_samples, rng):
    """Monte Carlo farthest-point distance to the centers over their convex hull."""
    n, d = centers.shape
    if d == 1:
        lo, hi = centers.min(), centers.max()
        pts = rng.uniform(lo, hi, size=(n_samples, 1))
    else:
        try:
            from scipy.spatial import ConvexHull

            hull = ConvexHull(centers)
        except Exception:
            return None, 0
        eqs = hull.equations
        lo, hi = centers.min(axis=0), centers.max(axis=0)
        chunks, accepted = [], 0
        for _ in range(200):
            cand = rng.uniform(lo, hi, size=(max(n_samples, 256), d))
            inside = np.all(cand @ eqs[:, :-1].T + eqs[:, -1] <= 1e-9, axis=1)
            good = cand[inside]
            if len(good):
                chunks.append(good)
                accepted += len(good)
            if accepted >= n_samples:
                break
        if not accepted:
            return None, 0
        pts = np.concatenate(chunks)[:n_samples]
    tree = cKDTree(centers)
    dists = tree.query(pts)[0]
    return float(dists.max()), len(pts)


def check_regularly_located(config, n_samples=10_000, seed=0):
    """Estimate the regular-location data (eps, R, monotone).

    eps is the exact minimal center distance; R is a sampled covering radius
    (farthest point of the centers' convex hull from the center set); monotone
    checks that radii are nonincreasing in |z| up to 1e-12 relative slack.
    """
    if len(config) < 2:
        raise ConfigError("regular-location check needs at least two balls")
    tree = cKDTree(config.centers)
    eps = float(tree.query(config.centers, k=2)[0][:, 1].min())
    rng = np.random.default_rng(seed)
    R, used = _covering_radius_estimate(config.centers, n_samples, rng)
    norms = config.center_norms()
    order = np.argsort(norms)
    r_sorted = config.radii[order]
    running = np.minimum.accumulate(r_sorted)
    monotone = bool(np.all(r_sorted <= running * (1 + 1e-12) + 1e-300))
    return RegularLocation(eps=eps, R=R, monotone=monotone, samples=used)


def criterion_sum(config, kernel, within=None):
    """Partial sums S1 = sum g(|z|)/g(r_z) and S2 = sum 1/g(r_z) over |z| <= within."""
    if config.d != kernel.d:
        raise ConfigError("kernel and configuration dimensions differ")
    if within is None:
        within = config.extent
    if within > config.extent * (1 + 1e-12):
        raise ConfigError(f"within={within:g} exceeds the configuration extent {config.extent:g}")
    if len(config) == 0:
        return 0.0, 0.0
    norms = config.center_norms()
    mask = norms <= within * (1 + 1e-12)
    if not mask.any():
        return 0.0, 0.0
    lg_rz = kernel.log_g(np.log(config.radii[mask]))
    s1 = math.fsum(np.exp(kernel.log_g(np.log(norms[mask])) - lg_rz))
    s2 = math.fsum(np.exp(-lg_rz))
    return float(s1), float(s2)


@dataclass(frozen=True)
class IntegralReport:
    value: float
    divergent: Optional[bool]
    power: Optional[float] = None
    log_power: Optional[float] = None
    note: str = ""


def criterion_integral(kernel, profile, d, R_max):
    """int_1^R_max r^(d-1) g(r)/g(phi(r)) dr plus its symbolic divergence class."""
    from .kernel import _quad  # shared quadrature policy

    if R_max <= 1:
        raise ConfigError("R_max must exceed 1")
    phi_vals = profile.radius(np.array([1.0, R_max]))
    if np.any(phi_vals <= 0) or np.any(~np.isfinite(phi_vals)):
        raise ConfigError("profile must be positive and finite on [1, R_max]")

    def integrand(r):
        lr = math.log(r)
        phi = float(profile.radius(r))
        return math.exp((d - 1) * lr + float(kernel.log_g(lr)) - float(kernel.log_g(math.log(phi))))

    value = _quad(integrand, 1.0, float(R_max), epsrel=1e-9)
    exps = integrand_exponent(kernel, profile, d)
    divergent = _decide_integral(exps)
    note = ""
    if divergent is True and exps is not None and abs(exps[0] + 1) <= _EXP_TOL:
        note = "boundary exponent: logarithmic growth"
    if exps is None:
        note = "no closed-form asymptotics for this kernel/profile pair"
    return IntegralReport(
        value=float(value),
        divergent=divergent,
        power=None if exps is None else exps[0],
        log_power=None if exps is None else exps[1],
        note=note,
    )


def radius_growth_ratio(kernel, profile, d, rho):
    """rho^d g(rho) / g(phi(rho)) at a single rho >= 1."""
    if rho < 1:
        raise ConfigError("rho must be >= 1")
    lr = math.log(rho)
    phi = float(profile.radius(rho))
    return math.exp(d * lr + float(kernel.log_g(lr)) - float(kernel.log_g(math.log(phi))))


def _growth_samples(kernel, profile, d, rhos=(10.0, 1e2, 1e3, 1e4, 1e5, 1e6)):
    return {f"{rho:g}": radius_growth_ratio(kernel, profile, d, rho) for rho in rhos}


# ---------------------------------------------------------------------------
# classifier
# ---------------------------------------------------------------------------


class Label(str, Enum):
    UNAVOIDABLE = "unavoidable"
    AVOIDABLE = "avoidable"
    INCONCLUSIVE = "inconclusive"


class Rule(str, Enum):
    DIVERGENT_SUM_SEPARATED = "divergent_sum_separated"
    DIVERGENT_INTEGRAL_REGULAR = "divergent_integral_regular"
    CONVERGENT_SERIES = "convergent_series"
    UNBOUNDED_GROWTH = "unbounded_growth_ratio"
    NONE = "none"


_UNAVOIDABLE_RULES = {
    Rule.DIVERGENT_SUM_SEPARATED,
    Rule.DIVERGENT_INTEGRAL_REGULAR,
    Rule.UNBOUNDED_GROWTH,
}


@dataclass(frozen=True)
class Verdict:
    label: Label
    rule: Rule
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.label == Label.UNAVOIDABLE and self.rule not in _UNAVOIDABLE_RULES:
            raise ConfigError(f"unavoidable verdicts need a divergence rule, got {self.rule}")
        if self.label == Label.AVOIDABLE and self.rule != Rule.CONVERGENT_SERIES:
            raise ConfigError("avoidable verdicts are only issued through the converse rule")
        if self.label == Label.INCONCLUSIVE and self.rule != Rule.NONE:
            raise ConfigError("inconclusive verdicts carry no rule")

    def to_json(self):
        return {"label": self.label.value, "rule": self.rule.value, "evidence": self.evidence}


def _fit_profile_exponent(config):
    """Least-squares fit log r_z ~ log a - beta log |z|, as a suggestion only."""
    if len(config) < 10:
        return None
    x = np.log(config.center_norms())
    y = np.log(config.radii)
    if np.ptp(x) < 1e-9:
        return None
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return {"a": float(math.exp(intercept)), "beta": float(-slope), "r_squared": r2}


def _density_lattice_like(config):
    """Shell counts should scale like volume for the symbolic sum analysis."""
    norms = config.center_norms()
    R = config.extent
    inner = int(np.count_nonzero(norms <= R / 2))
    total = len(config)
    if inner == 0 or total < 16:
        return False
    expected = total / 2**config.d
    return expected / 3 <= inner <= 3 * expected


def classify(config, kernel):
    """Decide unavoidable / avoidable / inconclusive for the union of balls.

    Verdicts are issued symbolically for profile-backed families; the decision
    chain mirrors the case split behind the regular-location criterion:

    1. regularly located, growth ratio unbounded          -> unavoidable
    2. regularly located, weight integral divergent       -> unavoidable
    3. weight integral/sum convergent                     -> avoidable
    4. separated (not regular) with divergent weight sum  -> unavoidable
    5. otherwise                                          -> inconclusive

    Raw ball lists without a profile always land in case 5, with partial sums
    and a fitted profile exponent as evidence.
    """
    if config.d != kernel.d:
        raise ConfigError("kernel and configuration dimensions differ")
    evidence = {"n_balls": len(config), "extent": config.extent}

    sep = separation_infimum(config, kernel) if len(config) else None
    if sep is not None:
        evidence["separation_infimum"] = sep.infimum
        evidence["separation_bounded_below"] = sep.bounded_below
    reg = None
    if len(config) >= 2:
        reg = check_regularly_located(config)
        evidence["regular_location"] = {
            "eps": reg.eps,
            "R": reg.R,
            "monotone": reg.monotone,
        }
    for frac, key in ((0.25, "quarter"), (0.5, "half"), (1.0, "full")):
        s1, s2 = criterion_sum(config, kernel, within=config.extent * frac)
        evidence[f"partial_sum_{key}"] = {"S1": s1, "S2": s2, "within": config.extent * frac}

    profile = config.profile
    symbolic_ok = (
        profile is not None
        and kernel.asym_large() is not None
        and kernel.asym_small() is not None
    )
    if symbolic_ok:
        grow = growth_exponent(kernel, profile, config.d)
        unbounded = _decide_unbounded_growth(grow)
        integ = criterion_integral(kernel, profile, config.d, max(config.extent, 10.0))
        evidence["growth_exponent"] = grow
        evidence["growth_samples"] = _growth_samples(kernel, profile, config.d)
        evidence["integral"] = {
            "value": integ.value,
            "divergent": integ.divergent,
            "power": integ.power,
            "log_power": integ.log_power,
            "note": integ.note,
        }
        regular = reg is not None and reg.passes(extent=config.extent)
        evidence["regularly_located"] = regular
        if regular:
            if unbounded is True:
                return Verdict(Label.UNAVOIDABLE, Rule.UNBOUNDED_GROWTH, evidence)
            if integ.divergent is True:
                return Verdict(Label.UNAVOIDABLE, Rule.DIVERGENT_INTEGRAL_REGULAR, evidence)
        if integ.divergent is False:
            return Verdict(Label.AVOIDABLE, Rule.CONVERGENT_SERIES, evidence)
        if (
            not regular
            and integ.divergent is True
            and sep is not None
            and sep.bounded_below is True
            and _density_lattice_like(config)
        ):
            # sum and integral share their divergence class at lattice-like density
            return Verdict(Label.UNAVOIDABLE, Rule.DIVERGENT_SUM_SEPARATED, evidence)
    else:
        fitted = _fit_profile_exponent(config)
        if fitted is not None:
            evidence["fitted_profile"] = fitted
    return Verdict(Label.INCONCLUSIVE, Rule.NONE, evidence)


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def config_from_json(obj):
    """Build a configuration from {"d":..., "balls":[[x..., r],...]} or a generator spec."""
    try:
        d = int(obj["d"])
    except (TypeError, KeyError):
        raise ConfigError("config JSON must be an object with a 'd' key") from None
    if "balls" in obj:
        balls = np.asarray(obj["balls"], dtype=float)
        if balls.ndim != 2 or balls.shape[1] != d + 1:
            raise ConfigError(f"each ball must have {d} coordinates plus a radius")
        profile = profile_from_json(obj["profile"]) if "profile" in obj else None
        return ball_config(balls[:, :d], balls[:, d], profile=profile)
    if "generator" in obj:
        gen = obj["generator"]
        if "lattice" not in gen:
            raise ConfigError("only the 'lattice' generator is supported")
        lat = gen["lattice"]
        profile = profile_from_json(gen["profile"] if "profile" in gen else obj["profile"])
        return build_lattice_config(
            d=d, spacing=lat["spacing"], profile=profile, extent=lat["extent"]
        )
    raise ConfigError("config JSON needs either 'balls' or 'generator'")


def config_to_json(config):
    balls = np.concatenate([config.centers, config.radii[:, None]], axis=1)
    out = {"d": config.d, "balls": [[float(v) for v in row] for row in balls]}
    if config.profile is not None:
        out["profile"] = profile_to_json(config.profile)
    return out
