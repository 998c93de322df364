"""Radial potential-kernel models and their decay certificates.

A kernel here is a strictly decreasing radial density ``g`` on ``(0, inf)``
with ``g(0+) = inf`` and ``g(inf) = 0``.  The module provides the concrete
families (power-law kernels, a geometric-stable interpolant, tabulated data),
evaluators, the averaged-decay ratio

    ld_ratio(r) = d * int_0^r s^(d-1) g(s) ds / (r^d g(r)),

grid verification of the averaged-decay and multiplicative-decay properties,
and certification of the comparability constants (C_G, C_D, c, K, eta).

All evaluators work in log space (``log g`` as a function of ``log r``) so
that radii far below the double-precision underflow threshold stay usable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from .errors import (
    CertificationError,
    ExtrapolationError,
    KernelDomainError,
    QuadratureError,
)

__all__ = [
    "Asym",
    "Kernel",
    "RieszKernel",
    "GeometricStableKernel",
    "GeometricStableSmallR",
    "TabulatedKernel",
    "KernelCertificate",
    "LdReport",
    "UdReport",
    "ld_ratio",
    "verify_ld",
    "verify_ud",
    "certify",
    "ball_average_potential",
    "kernel_from_json",
    "kernel_to_json",
]

# Tolerances of the adaptive quadrature used for the radial integrals.
QUAD_EPSABS = 1e-9
QUAD_EPSREL = 1e-9
_QUAD_LIMIT = 500


@dataclass(frozen=True)
class Asym:
    """Leading behaviour ``C * r**power * |log r|**log_power`` of g at 0 or inf."""

    power: float
    log_power: float = 0.0


def _default_grid_range(kernel):
    """Default radius range for verification grids, kept above the thresholds."""
    lo = max(kernel.R0, kernel.R1)
    lo = lo * 1.01 if lo > 0 else 1e-6
    hi = 1e6 * max(kernel.R0, kernel.R1, 1.0)
    return lo, hi


class Kernel:
    """Base class: a radial, strictly decreasing potential density g.

    Subclasses implement ``log_g`` (log of g as a function of log r) and may
    provide closed-form hooks for the decay ratios; everything else falls back
    to adaptive quadrature.
    """

    family = "abstract"

    def __init__(self, d, R0=0.0, R1=0.0):
        if d != int(d) or d < 1:
            raise KernelDomainError(f"dimension must be a positive integer, got {d}")
        if R0 < 0 or R1 < 0:
            raise KernelDomainError("decay thresholds R0, R1 must be nonnegative")
        self.d = int(d)
        self.R0 = float(R0)
        self.R1 = float(R1)

    # -- evaluation ---------------------------------------------------------

    def log_g(self, log_r):
        raise NotImplementedError

    def g(self, r):
        """Evaluate g(r) for r > 0 (scalar or array)."""
        arr = np.asarray(r, dtype=float)
        if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 0.0)):
            raise KernelDomainError("g(r) requires finite r > 0")
        out = np.exp(self.log_g(np.log(arr)))
        if np.ndim(r) == 0:
            return float(out)
        return out

    # -- closed-form hooks (None means: use the numeric path) ---------------

    def ld_ratio_exact(self, r) -> Optional[float]:
        return None

    def doubling_exact(self) -> Optional[float]:
        return None

    def ud_eta_exact(self, K) -> Optional[float]:
        return None

    def asym_small(self) -> Optional[Asym]:
        """Leading behaviour of g(r) as r -> 0, if known in closed form."""
        return None

    def asym_large(self) -> Optional[Asym]:
        """Leading behaviour of g(r) as r -> inf, if known in closed form."""
        return None

    # -- shape check --------------------------------------------------------

    def _check_shape(self, lo, hi, n=1201):
        """Sampled sanity check: g finite, positive, nonincreasing on a log grid."""
        lr = np.linspace(math.log(lo), math.log(hi), n)
        lg = self.log_g(lr)
        if not np.all(np.isfinite(lg)):
            raise KernelDomainError(f"{self.family}: g is not finite/positive on ({lo:g}, {hi:g})")
        if np.any(np.diff(lg) > 1e-12):
            k = int(np.argmax(np.diff(lg)))
            raise KernelDomainError(
                f"{self.family}: g is not nonincreasing near r={math.exp(lr[k]):.6g}"
            )


class RieszKernel(Kernel):
    """Power-law kernel g(r) = r**(alpha - d) for 0 < alpha < d.

    ``alpha <= 2`` corresponds to Brownian motion (alpha = 2) and isotropic
    alpha-stable processes; larger alpha is accepted for numerical studies
    even though no process is attached to it.  Both decay properties hold on
    all of (0, inf), so R0 = R1 = 0.
    """

    family = "riesz"

    def __init__(self, alpha, d):
        super().__init__(d)
        if not (0 < alpha < d):
            raise KernelDomainError(f"riesz kernel requires 0 < alpha < d, got alpha={alpha}, d={d}")
        self.alpha = float(alpha)

    def __repr__(self):
        return f"RieszKernel(alpha={self.alpha:g}, d={self.d})"

    def log_g(self, log_r):
        return (self.alpha - self.d) * np.asarray(log_r, dtype=float)

    def ld_ratio_exact(self, r):
        return self.d / self.alpha

    def doubling_exact(self):
        return 2.0 ** (self.d - self.alpha)

    def ud_eta_exact(self, K):
        return float(K) ** (self.alpha - self.d)

    def asym_small(self):
        return Asym(self.alpha - self.d)

    def asym_large(self):
        return Asym(self.alpha - self.d)


class GeometricStableKernel(Kernel):
    """Smooth decreasing interpolant between the two geometric-stable regimes.

        g(r) = r**(-d) * log(e + 1/r)**(-(1+delta)) + (1 + r)**(delta*alpha - d)

    which behaves like r**(-d) * log(1/r)**(-(1+delta)) as r -> 0 and like
    r**(delta*alpha - d) as r -> inf, with unit coefficients in both regimes.
    The averaged-decay property fails as r -> 0 for this family, so positive
    thresholds r0, r1 are required.  Monotonicity is verified numerically at
    construction.
    """

    family = "geometric_stable"

    def __init__(self, alpha, delta, d, r0, r1):
        super().__init__(d, R0=r0, R1=r1)
        if not (0 < delta <= 1):
            raise KernelDomainError(f"geometric_stable requires 0 < delta <= 1, got {delta}")
        if not (0 < alpha <= 2):
            raise KernelDomainError(f"geometric_stable requires 0 < alpha <= 2, got {alpha}")
        if not alpha < d:
            raise KernelDomainError(f"geometric_stable requires alpha < d, got alpha={alpha}, d={d}")
        if not (r0 > 0 and r1 > 0):
            raise KernelDomainError("geometric_stable requires strictly positive thresholds r0, r1")
        self.alpha = float(alpha)
        self.delta = float(delta)
        self._check_shape(1e-9, 1e9)

    def __repr__(self):
        return (
            f"GeometricStableKernel(alpha={self.alpha:g}, delta={self.delta:g}, "
            f"d={self.d}, r0={self.R0:g}, r1={self.R1:g})"
        )

    def log_g(self, log_r):
        lr = np.asarray(log_r, dtype=float)
        # log(e + 1/r) = logaddexp(1, -log r), stable for r far below underflow
        t1 = -self.d * lr - (1.0 + self.delta) * np.log(np.logaddexp(1.0, -lr))
        t2 = (self.delta * self.alpha - self.d) * np.logaddexp(0.0, lr)
        return np.logaddexp(t1, t2)

    def asym_small(self):
        return Asym(-self.d, -(1.0 + self.delta))

    def asym_large(self):
        return Asym(self.delta * self.alpha - self.d)


class GeometricStableSmallR(Kernel):
    """Pure small-scale regime g(r) = r**(-d) * log(1/r)**(-(1+delta)).

    Valid (decreasing) only on r < exp(-(1+delta)/d); evaluation beyond that
    raises.  This is the form used to study how the averaged-decay constant
    blows up toward r = 0.
    """

    family = "geometric_stable_small_r"

    def __init__(self, delta, d):
        super().__init__(d)
        if not (0 < delta <= 1):
            raise KernelDomainError(f"geometric_stable_small_r requires 0 < delta <= 1, got {delta}")
        self.delta = float(delta)
        self.r_cut = math.exp(-(1.0 + self.delta) / self.d)
        self._check_shape(1e-12, self.r_cut * 0.999)

    def __repr__(self):
        return f"GeometricStableSmallR(delta={self.delta:g}, d={self.d})"

    def log_g(self, log_r):
        lr = np.asarray(log_r, dtype=float)
        if np.any(lr >= math.log(self.r_cut)):
            raise KernelDomainError(
                f"small-scale model is only decreasing for r < {self.r_cut:.6g}"
            )
        return -self.d * lr - (1.0 + self.delta) * np.log(-lr)

    def asym_small(self):
        return Asym(-self.d, -(1.0 + self.delta))


class TabulatedKernel(Kernel):
    """Kernel interpolated from (r, g) samples.

    Uses shape-preserving (monotone) interpolation in log-log coordinates.
    Queries outside the sampled range raise ExtrapolationError; silent
    extrapolation would violate the standing monotonicity assumption.
    """

    family = "tabulated"

    def __init__(self, d, samples, R0=0.0, R1=0.0):
        super().__init__(d, R0=R0, R1=R1)
        pts = np.asarray(samples, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise KernelDomainError("tabulated kernel needs at least 2 (r, g) samples")
        order = np.argsort(pts[:, 0])
        r, v = pts[order, 0], pts[order, 1]
        if np.any(r <= 0) or np.any(v <= 0):
            raise KernelDomainError("tabulated samples must have r > 0 and g > 0")
        if np.any(np.diff(r) <= 0):
            raise KernelDomainError("tabulated radii must be distinct")
        if np.any(np.diff(v) >= 0):
            raise KernelDomainError("tabulated values must be strictly decreasing in r")
        self.radii = r
        self.values = v
        self._interp = PchipInterpolator(np.log(r), np.log(v), extrapolate=False)

    def __repr__(self):
        return f"TabulatedKernel(d={self.d}, n={len(self.radii)})"

    def log_g(self, log_r):
        lr = np.asarray(log_r, dtype=float)
        lo, hi = math.log(self.radii[0]), math.log(self.radii[-1])
        if np.any(lr < lo - 1e-12) or np.any(lr > hi + 1e-12):
            raise ExtrapolationError(
                f"query outside tabulated range [{self.radii[0]:g}, {self.radii[-1]:g}]"
            )
        return self._interp(np.clip(lr, lo, hi))


# ---------------------------------------------------------------------------
# radial integrals
# ---------------------------------------------------------------------------


def _quad(f, a, b, **kw):
    opts = dict(epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=_QUAD_LIMIT)
    opts.update(kw)
    res = integrate.quad(f, a, b, full_output=1, **opts)
    value, abserr = res[0], res[1]
    if len(res) > 3 and abserr > 1e-6 * max(1.0, abs(value)):
        raise QuadratureError(
            f"quadrature did not converge on ({a:g}, {b:g}): {res[3]} "
            f"(value={value:.6g}, abserr={abserr:.3g})"
        )
    return value


def ld_ratio(kernel, r, method="auto"):
    """Averaged-decay ratio d * int_0^r s^(d-1) g(s) ds / (r^d g(r)).

    Always >= 1 for decreasing g; equals the potential of the normalized
    uniform measure on B(0, r) at the center, divided by g(r).  ``method``
    "auto" uses a closed form when the family has one, "quadrature" forces
    the numeric path (substitution s = r * exp(-u) resolves the singular end).
    """
    if r <= 0:
        raise KernelDomainError("ld_ratio requires r > 0")
    if method == "auto":
        exact = kernel.ld_ratio_exact(r)
        if exact is not None:
            return exact
    elif method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    lr = math.log(r)
    lg_r = float(kernel.log_g(lr))
    d = kernel.d

    def integrand(u):
        return math.exp(-d * u + float(kernel.log_g(lr - u)) - lg_r)

    return d * _quad(integrand, 0.0, np.inf)


def _int_g_power(kernel, T, p):
    """int_0^T t^p g(t) dt via the log substitution t = T * exp(-u)."""
    if T <= 0:
        return 0.0
    lT = math.log(T)
    lgT = float(kernel.log_g(lT))

    def integrand(u):
        return math.exp(-(p + 1.0) * u + float(kernel.log_g(lT - u)) - lgT)

    return math.exp((p + 1.0) * lT + lgT) * _quad(integrand, 0.0, np.inf)


@dataclass(frozen=True)
class LdReport:
    holds: bool
    C_G: float
    r_min: float
    r_max: float
    n: int
    argmax_r: float
    adjusted_C: Optional[float] = None
    warnings: tuple = ()


def verify_ld(kernel, r_min=None, r_max=None, n=64, method="auto"):
    """Grid supremum of the averaged-decay ratio over [r_min, r_max].

    The supremum over a finite grid is a lower bound for the true constant.
    When r_min lies below the kernel's certified threshold R0, an adjusted
    constant C_G * (r_max / r_min)^d is reported as well: a finite constant
    on (R0, inf) always extends down to any positive radius at that price.
    A warning is attached when the supremum concentrates at the small-radius
    end of the grid, which signals unbounded growth as r_min -> 0.
    """
    lo, hi = _default_grid_range(kernel)
    r_min = lo if r_min is None else float(r_min)
    r_max = hi if r_max is None else float(r_max)
    if r_min <= 0 or r_min >= r_max:
        raise KernelDomainError("verify_ld requires 0 < r_min < r_max")
    if n < 2:
        raise KernelDomainError("verify_ld requires a grid of at least 2 radii")
    grid = np.exp(np.linspace(math.log(r_min), math.log(r_max), int(n)))
    ratios = np.array([ld_ratio(kernel, r, method=method) for r in grid])
    C_G = float(ratios.max())
    argmax_r = float(grid[int(ratios.argmax())])
    warnings = []
    adjusted = None
    if kernel.R0 > 0 and r_min < kernel.R0:
        adjusted = C_G * (r_max / r_min) ** kernel.d
        warnings.append(
            f"grid extends below the certified threshold R0={kernel.R0:g}; "
            f"constant adjusted to C_G*(r_max/r_min)^d = {adjusted:.6g}"
        )
    half = len(grid) // 2
    if ratios[:half].max() > 1.05 * ratios[half:].max():
        warnings.append(
            "supremum is attained at the small-radius end of the grid; "
            "the constant appears to grow without bound as r_min -> 0"
        )
    return LdReport(
        holds=bool(np.isfinite(C_G)),
        C_G=C_G,
        r_min=r_min,
        r_max=r_max,
        n=int(n),
        argmax_r=argmax_r,
        adjusted_C=adjusted,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class UdReport:
    holds: bool
    eta: float
    K: float
    r_min: float
    r_max: float
    n: int


def verify_ud(kernel, K, r_min=None, r_max=None, n=64):
    """Grid supremum of g(K r) / g(r): multiplicative decay at scale K > 1."""
    if K <= 1:
        raise KernelDomainError("verify_ud requires K > 1")
    lo, hi = _default_grid_range(kernel)
    r_min = lo if r_min is None else float(r_min)
    r_max = hi if r_max is None else float(r_max)
    if r_min <= 0 or r_min >= r_max:
        raise KernelDomainError("verify_ud requires 0 < r_min < r_max")
    if n < 2:
        raise KernelDomainError("verify_ud requires a grid of at least 2 radii")
    lr = np.linspace(math.log(r_min), math.log(r_max), int(n))
    eta = float(np.exp(kernel.log_g(lr + math.log(K)) - kernel.log_g(lr)).max())
    return UdReport(holds=eta < 1.0, eta=eta, K=float(K), r_min=r_min, r_max=r_max, n=int(n))


@dataclass(frozen=True)
class KernelCertificate:
    """Certified comparability constants of a kernel.

    ``exact`` marks certificates whose constants come from closed forms (exact
    suprema); grid-based certificates are lower bounds on the true suprema and
    downstream consumers multiply c by a 1.05 safety factor (``c_safe``).
    """

    C_G: float
    C_D: float
    c: float
    K: float
    eta_ud: float
    grid: tuple
    exact: bool
    C_G_exact: Optional[Fraction] = None
    C_D_exact: Optional[Fraction] = None
    c_exact: Optional[Fraction] = None

    SAFETY_FACTOR = 1.05

    def __post_init__(self):
        if self.c != max(self.C_D, self.C_G):
            raise CertificationError("certificate must satisfy c = max(C_D, C_G)")
        if self.c < 1.0 - 1e-12:
            raise CertificationError("comparability constant c must be >= 1")

    @property
    def c_safe(self):
        """c as used downstream: exact certificates need no safety margin."""
        return self.c if self.exact else self.SAFETY_FACTOR * self.c

    @property
    def c_safe_exact(self) -> Optional[Fraction]:
        return self.c_exact if self.exact else None


def _riesz_fractions(kernel):
    """Exact rational constants for power-law kernels, where representable."""
    C_G = Fraction(kernel.d) / Fraction(kernel.alpha)
    gap = kernel.d - kernel.alpha
    C_D = Fraction(2) ** int(gap) if gap == int(gap) else None
    if C_D is not None:
        c = max(C_D, C_G)
    else:
        # C_D = 2**gap is irrational here, but c = C_G is still exact when it dominates
        c = C_G if 2.0**gap <= float(C_G) * (1 + 1e-12) else None
    return C_G, C_D, c


def certify(kernel, r_min=None, r_max=None, n=64, K_candidates=range(2, 11)):
    """Produce a KernelCertificate: averaged decay, doubling, decay at infinity.

    The smallest integer K in ``K_candidates`` achieving eta < 1 on the grid
    is recorded; failure to find one raises CertificationError.
    """
    lo, hi = _default_grid_range(kernel)
    r_min = lo if r_min is None else float(r_min)
    r_max = hi if r_max is None else float(r_max)
    if isinstance(kernel, TabulatedKernel):
        r_min = max(r_min, 2.02 * kernel.radii[0])
        r_max = min(r_max, kernel.radii[-1] / 1.01)
    grid = np.exp(np.linspace(math.log(r_min), math.log(r_max), int(n)))

    exact_ld = kernel.ld_ratio_exact(grid[0])
    if exact_ld is not None:
        C_G = exact_ld
    else:
        C_G = float(max(ld_ratio(kernel, r) for r in grid))

    exact_cd = kernel.doubling_exact()
    if exact_cd is not None:
        C_D = exact_cd
    else:
        lr = np.log(grid)
        C_D = float(np.exp(kernel.log_g(lr - math.log(2.0)) - kernel.log_g(lr)).max())

    if C_D > (2.0**kernel.d) * C_G * (1 + 1e-9):
        raise CertificationError(
            f"doubling constant {C_D:.6g} exceeds 2^d * C_G = {(2.0 ** kernel.d) * C_G:.6g}"
        )

    K = eta = None
    for cand in K_candidates:
        ex = kernel.ud_eta_exact(cand)
        if ex is not None:
            eta_c = ex
        else:
            eta_c = min(verify_ud(kernel, cand, r_min, r_max, n).eta, 1.0 + 0.0)
        if eta_c < 1.0:
            K, eta = float(cand), float(eta_c)
            break
    if K is None:
        raise CertificationError(
            f"no scale K in {list(K_candidates)} achieves g(Kr) <= eta*g(r) with eta < 1"
        )

    exact = exact_ld is not None and exact_cd is not None and kernel.ud_eta_exact(K) is not None
    fr_CG = fr_CD = fr_c = None
    if isinstance(kernel, RieszKernel):
        fr_CG, fr_CD, fr_c = _riesz_fractions(kernel)
    return KernelCertificate(
        C_G=C_G,
        C_D=C_D,
        c=max(C_D, C_G),
        K=K,
        eta_ud=eta,
        grid=tuple(float(r) for r in grid),
        exact=exact,
        C_G_exact=fr_CG,
        C_D_exact=fr_CD,
        c_exact=fr_c,
    )


# ---------------------------------------------------------------------------
# averaged potential of a ball
# ---------------------------------------------------------------------------


def _sphere_average(kernel, rho, s, d):
    """Average of g(|x - y|) over the sphere |y| = s, with |x| = rho, d >= 2."""
    if d == 2:
        def f(theta):
            t = math.sqrt(max(rho * rho + s * s - 2 * rho * s * math.cos(theta), 0.0))
            return float(kernel.g(t)) if t > 0 else math.inf

        return _quad(f, 0.0, math.pi, epsrel=1e-8) / math.pi
    # generic d: weight sin(theta)^(d-2), normalized by its closed-form integral
    norm = math.sqrt(math.pi) * math.gamma((d - 1) / 2.0) / math.gamma(d / 2.0)

    def f(theta):
        t = math.sqrt(max(rho * rho + s * s - 2 * rho * s * math.cos(theta), 0.0))
        if t <= 0:
            return math.inf
        return float(kernel.g(t)) * math.sin(theta) ** (d - 2)

    return _quad(f, 0.0, math.pi, epsrel=1e-8) / norm


def ball_average_potential(kernel, dist, r):
    """Potential of the normalized uniform measure on B(0, r), at distance dist.

    At dist = 0 this is exactly ld_ratio(kernel, r) * g(r) (same integral).
    For d = 3, rotational symmetry reduces the computation to the smooth
    profile H(T) = int_0^T t g(t) dt, which avoids the interior singularity;
    other dimensions use nested quadrature over the polar angle.
    """
    if r <= kernel.R0:
        raise KernelDomainError(f"ball_average_potential requires r > R0 = {kernel.R0:g}")
    if dist < 0:
        raise KernelDomainError("dist must be nonnegative")
    d = kernel.d
    if dist == 0:
        return ld_ratio(kernel, r) * kernel.g(r)
    rho = float(dist)

    if d == 1:
        if rho >= r:
            return _quad(lambda t: float(kernel.g(t)), rho - r, rho + r, epsrel=1e-8) / (2 * r)
        return (_int_g_power(kernel, r - rho, 0) + _int_g_power(kernel, r + rho, 0)) / (2 * r)

    if d == 3:
        def outer(s):
            return s * (_int_g_power(kernel, rho + s, 1) - _int_g_power(kernel, abs(rho - s), 1))

        pts = [rho] if rho < r else None
        val = _quad(outer, 0.0, r, points=pts, epsrel=1e-8)
        return 3.0 * val / (2.0 * rho * r**3)

    def outer(s):
        return s ** (d - 1) * _sphere_average(kernel, rho, s, d)

    pts = [rho] if rho < r else None
    val = _quad(outer, 0.0, r, points=pts, epsrel=1e-7)
    return d * val / r**d


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def kernel_from_json(obj):
    """Build a kernel from its JSON object form (see README for the schema)."""
    try:
        family = obj["family"]
    except (TypeError, KeyError):
        raise KernelDomainError("kernel JSON must be an object with a 'family' key") from None
    if family == "riesz":
        return RieszKernel(alpha=obj["alpha"], d=obj["d"])
    if family == "geometric_stable":
        return GeometricStableKernel(
            alpha=obj["alpha"], delta=obj["delta"], d=obj["d"], r0=obj["r0"], r1=obj["r1"]
        )
    if family == "geometric_stable_small_r":
        return GeometricStableSmallR(delta=obj["delta"], d=obj["d"])
    if family == "tabulated":
        return TabulatedKernel(
            d=obj["d"], samples=obj["samples"], R0=obj.get("r0", 0.0), R1=obj.get("r1", 0.0)
        )
    raise KernelDomainError(f"unknown kernel family {family!r}")


def kernel_to_json(kernel):
    if isinstance(kernel, RieszKernel):
        return {"family": "riesz", "alpha": kernel.alpha, "d": kernel.d}
    if isinstance(kernel, GeometricStableKernel):
        return {
            "family": "geometric_stable",
            "alpha": kernel.alpha,
            "delta": kernel.delta,
            "d": kernel.d,
            "r0": kernel.R0,
            "r1": kernel.R1,
        }
    if isinstance(kernel, GeometricStableSmallR):
        return {"family": "geometric_stable_small_r", "delta": kernel.delta, "d": kernel.d}
    if isinstance(kernel, TabulatedKernel):
        return {
            "family": "tabulated",
            "d": kernel.d,
            "samples": [[float(r), float(v)] for r, v in zip(kernel.radii, kernel.values)],
            "r0": kernel.R0,
            "r1": kernel.R1,
        }
    raise KernelDomainError(f"cannot serialize kernel of type {type(kernel).__name__}")
