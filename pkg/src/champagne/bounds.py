"""Explicit potential-theoretic bounds and constants.

Everything here is interval arithmetic around the certified comparability
constant c: the equilibrium-mass (capacity) sandwich for balls, two-sided
bounds on the hitting probability of a ball from a distance, and the shell
constants (eta, C, delta, M) of the iterated-shell hitting estimate together
with the integer searches for the outer-radius multiples M.

Grid-certified (inexact) kernels enter through c_safe, which carries a 1.05
safety factor; closed-form certificates are exact and are additionally
reported as rationals where the arithmetic allows it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import CertificationError, ConfigError, KernelDomainError

__all__ = [
    "CapacityBounds",
    "capacity_bounds",
    "reduced_function_bounds",
    "HameConstants",
    "hame_constants",
    "ShellConstants",
    "shell_constants",
    "ShellBound",
    "shell_lower_bound",
    "default_rho_range",
]

_M_LIMIT = 10**9
_RHO_GRID_SIZE = 64
_PRED_SLACK = 1e-12  # relative slack so float rounding cannot flip an exact boundary


def default_rho_range(kernel):
    """Default shell-scale range: above the decay thresholds, six decades wide."""
    lo = max(kernel.R0, kernel.R1)
    lo = lo * 1.01 if lo > 0 else 1e-3
    hi = 1e6 * max(kernel.R0, kernel.R1, 1.0)
    return lo, hi


@dataclass(frozen=True)
class CapacityBounds:
    """Two-sided bounds on the equilibrium mass of a ball of radius r."""

    lower: float
    upper: float
    r: float
    c_used: float

    def __post_init__(self):
        if not (0 < self.lower <= self.upper):
            raise CertificationError("capacity interval must be ordered and positive")


def capacity_bounds(kernel, cert, r):
    """(c g(r))^-1 <= equilibrium mass of B(0, r) <= c / g(r), for r > R0."""
    if r <= kernel.R0:
        raise KernelDomainError(f"capacity bounds require r > R0 = {kernel.R0:g}")
    c = cert.c_safe
    g_r = kernel.g(r)
    return CapacityBounds(lower=1.0 / (c * g_r), upper=c / g_r, r=float(r), c_used=c)


def reduced_function_bounds(kernel, cert, r, dist):
    """Interval bounding the probability of ever hitting B(0, r) from distance dist.

    Lower bound c^-1 g(dist + r)/g(r); upper bound min(1, g(dist)/g(r)), which
    is 1 on the ball itself (dist <= r).
    """
    if r <= kernel.R0:
        raise KernelDomainError(f"reduced-function bounds require r > R0 = {kernel.R0:g}")
    if dist < 0:
        raise KernelDomainError("dist must be nonnegative")
    c = cert.c_safe
    g_r = kernel.g(r)
    lower = kernel.g(dist + r) / (c * g_r)
    upper = 1.0 if dist <= r else min(1.0, kernel.g(dist) / g_r)
    return (float(lower), float(upper))


def _rho_grid(kernel, rho_range, extra=()):
    lo, hi = default_rho_range(kernel) if rho_range is None else rho_range
    if not (0 < lo < hi):
        raise KernelDomainError("rho_range must satisfy 0 < lo < hi")
    grid = np.exp(np.linspace(math.log(lo), math.log(hi), _RHO_GRID_SIZE))
    if extra:
        grid = np.concatenate([grid, np.asarray(extra, dtype=float)])
    return grid


def _search_min_m(kernel, grid, target, offset, m_floor):
    """Smallest integer M > m_floor with g((M - offset) rho) <= target * g(rho) on the grid.

    Doubling to bracket, then bisection; the predicate is monotone in M since
    g is decreasing.  Fails if nothing below the search limit works.
    """
    log_grid = np.log(grid)
    log_g_grid = kernel.log_g(log_grid)

    def admissible(m):
        ratios = np.exp(kernel.log_g(log_grid + math.log(m - offset)) - log_g_grid)
        return bool(np.all(ratios <= target * (1 + _PRED_SLACK)))

    lo = m_floor  # exclusive: M must be > m_floor
    hi = m_floor + 1
    while not admissible(hi):
        lo = hi
        hi *= 2
        if hi > _M_LIMIT:
            raise CertificationError(
                f"no outer-radius multiple M <= {_M_LIMIT:g} achieves the required decay; "
                "the kernel decays too slowly over the requested rho range"
            )
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if admissible(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class HameConstants:
    """Shell-hitting constants: P0[hit S(r) before leaving B(0, Mr)] >= eta."""

    eta: float
    M: int
    eta_exact: Optional[Fraction] = None

    def __post_init__(self):
        if not (0 < self.eta <= 0.5):
            raise CertificationError("eta = c^-3 / 2 must lie in (0, 1/2]")
        if self.M <= 3:
            raise CertificationError("M must exceed 3")


def hame_constants(kernel, cert, r, rho_range=None):
    """eta = c^-3 / 2 and the smallest M > 3 with g((M-2) rho) <= eta g(rho).

    The inequality is verified on a log grid over rho_range (plus the working
    radius r itself), so the returned M is certified for every sampled scale.
    """
    if r <= kernel.R0 or r <= kernel.R1:
        raise KernelDomainError(
            f"hame constants require r above both thresholds (R0={kernel.R0:g}, R1={kernel.R1:g})"
        )
    c = cert.c_safe
    eta = c**-3 / 2.0
    eta_exact = None
    if cert.c_safe_exact is not None:
        eta_exact = 1 / (2 * cert.c_safe_exact**3)
        eta = float(eta_exact)
    grid = _rho_grid(kernel, rho_range, extra=(r,))
    M = _search_min_m(kernel, grid, eta, offset=2, m_floor=3)
    return HameConstants(eta=eta, M=int(M), eta_exact=eta_exact)


@dataclass(frozen=True)
class ShellConstants:
    """Constants of the quantitative shell lower bound.

    C = 1 + (4/eps)^d c^3, delta = (2 C c^4)^-1, and M is the smallest integer
    above 4 with g((M-3) rho) <= delta g(rho) over the working rho range.
    eta_hame = c^-3 / 2 is carried along for the companion shell-hitting bound.
    """

    eps: float
    eta_hame: float
    C: float
    delta: float
    M: int
    c_used: float
    d: int
    rho_range: tuple
    C_exact: Optional[Fraction] = None
    delta_exact: Optional[Fraction] = None
    eta_exact: Optional[Fraction] = None

    def __post_init__(self):
        if not (0 < self.eps <= 0.25):
            raise CertificationError("eps must lie in (0, 1/4]")
        if self.C < 1.0:
            raise CertificationError("C must be >= 1")
        if not (0 < self.delta < 1):
            raise CertificationError("delta must lie in (0, 1)")
        if self.M <= 4:
            raise CertificationError("M must exceed 4")
        if not (0 < self.eta_hame <= 0.5):
            raise CertificationError("eta_hame must lie in (0, 1/2]")

    def to_json(self):
        out = {
            "eps": self.eps,
            "eta_hame": self.eta_hame,
            "C": self.C,
            "delta": self.delta,
            "M": self.M,
            "c_used": self.c_used,
            "d": self.d,
            "rho_range": list(self.rho_range),
        }
        if self.C_exact is not None:
            out["C_exact"] = str(self.C_exact)
            out["delta_exact"] = str(self.delta_exact)
            out["eta_exact"] = str(self.eta_exact)
        return out


def shell_constants(kernel, cert, eps, rho_range=None):
    """Compute (eta, C, delta, M) for separation scale eps in (0, 1/4]."""
    if not (0 < eps <= 0.25):
        raise KernelDomainError(f"eps must lie in (0, 1/4], got {eps:g}")
    c = cert.c_safe
    d = kernel.d
    C = 1.0 + (4.0 / eps) ** d * c**3
    delta = 1.0 / (2.0 * C * c**4)
    eta = c**-3 / 2.0
    C_exact = delta_exact = eta_exact = None
    if cert.c_safe_exact is not None:
        c_fr = cert.c_safe_exact
        eps_fr = Fraction(eps)
        C_exact = 1 + (4 / eps_fr) ** d * c_fr**3
        delta_exact = 1 / (2 * C_exact * c_fr**4)
        eta_exact = 1 / (2 * c_fr**3)
        C, delta, eta = float(C_exact), float(delta_exact), float(eta_exact)
    grid = _rho_grid(kernel, rho_range)
    M = _search_min_m(kernel, grid, delta, offset=3, m_floor=4)
    lo, hi = (grid[0], grid[-1])
    return ShellConstants(
        eps=float(eps),
        eta_hame=eta,
        C=C,
        delta=delta,
        M=int(M),
        c_used=c,
        d=d,
        rho_range=(float(lo), float(hi)),
        C_exact=C_exact,
        delta_exact=delta_exact,
        eta_exact=eta_exact,
    )


@dataclass(frozen=True)
class ShellBound:
    """Lower bound on hitting the balls of one shell before leaving B(0, M rho)."""

    value: float
    rho: float
    weight_sum: float
    hypotheses_ok: bool
    violations: tuple = ()


def shell_lower_bound(constants, kernel, config, rho):
    """delta * sum_z g(|z|)/g(r_z), clipped at 1, for balls inside the shell S(rho).

    The shell is the closed annulus rho <= |z| <= 3 rho.  Centers outside it
    are an error; the radius bound r_z <= |z|/4 and the capacity-scaled
    spacing hypothesis are checked and reported, but a violated hypothesis
    only flags the bound as inapplicable rather than suppressing it.
    """
    if rho <= 0:
        raise KernelDomainError("rho must be positive")
    if config.d != kernel.d:
        raise ConfigError("kernel and configuration dimensions differ")
    n = len(config)
    if n == 0:
        return ShellBound(value=0.0, rho=float(rho), weight_sum=0.0, hypotheses_ok=True)
    norms = config.center_norms()
    slack = 1 + 1e-12
    if np.any(norms < rho / slack) or np.any(norms > 3 * rho * slack):
        raise ConfigError("all centers must lie in the closed shell rho <= |z| <= 3 rho")
    violations = []
    if np.any(config.radii > norms / 4 * slack):
        violations.append("some radii exceed |z|/4")
    log_weights = kernel.log_g(np.log(norms)) - kernel.log_g(np.log(config.radii))
    if n >= 2:
        from scipy.spatial import cKDTree

        nn = cKDTree(config.centers).query(config.centers, k=2)[0][:, 1]
        required = 4.0 * constants.eps * norms * np.exp(log_weights / config.d)
        if np.any(nn < required / slack):
            violations.append("nearest-neighbor spacing below 4 eps |z| (g(|z|)/g(r_z))^(1/d)")
    weight_sum = float(math.fsum(np.exp(log_weights)))
    return ShellBound(
        value=min(1.0, constants.delta * weight_sum),
        rho=float(rho),
        weight_sum=weight_sum,
        hypotheses_ok=not violations,
        violations=tuple(violations),
    )
