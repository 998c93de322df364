"""Compiled Monte Carlo walk kernels.

Each trial runs straight through in a numba-compiled loop with its own
counter-based random stream derived from (seed, trial index), so estimates
are bit-identical for any partition of the trial range across threads.

Obstacle geometry comes in three flavors, selected by an integer kind:
explicit ball lists behind a uniform-grid spatial index, lattice-generated
configurations evaluated in closed form, and the closed annulus used by the
shell-hitting bound.  The distance routines return a value that never
exceeds the true obstacle distance and equals it whenever it is small
(in particular wherever absorption can trigger), which is all that
walk-on-spheres and the jump-adapted stable walk require.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .errors import SimulationError

KIND_BALLS = 0
KIND_LATTICE = 1
KIND_SHELL = 2

PROFILE_CONSTANT = 0
PROFILE_POWER = 1
PROFILE_POWERLOG = 2

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_STREAM_SALT = _U64(0xD1342543DE82EF95)
_INV53 = 1.1102230246251565e-16  # 2**-53


# ---------------------------------------------------------------------------
# counter-based per-trial random streams (splitmix64 core)
# ---------------------------------------------------------------------------


@njit(inline="always")
def _mix64(z):
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


@njit(inline="always")
def _stream_init(seed, trial):
    # scramble with a constant unrelated to the stream increment so distinct
    # trials never walk the same arithmetic progression
    return _mix64(_mix64(seed ^ (_U64(trial) * _STREAM_SALT)) + _GOLDEN)


@njit(inline="always")
def _next_uniform(state):
    state = state + _GOLDEN
    z = _mix64(state)
    return state, (z >> _U64(11)) * _INV53


@njit(inline="always")
def _next_open_uniform(state):
    state, u = _next_uniform(state)
    if u <= 0.0:
        u = _INV53
    return state, u


@njit(inline="always")
def _unit_step(state, u, d):
    """Uniform direction on the unit sphere, written into u[:d]."""
    if d == 1:
        state, a = _next_uniform(state)
        u[0] = 1.0 if a < 0.5 else -1.0
    elif d == 2:
        state, a = _next_uniform(state)
        t = 2.0 * math.pi * a
        u[0] = math.cos(t)
        u[1] = math.sin(t)
    elif d == 3:
        state, a = _next_uniform(state)
        state, b = _next_uniform(state)
        z = 2.0 * a - 1.0
        s = math.sqrt(max(1.0 - z * z, 0.0))
        t = 2.0 * math.pi * b
        u[0] = s * math.cos(t)
        u[1] = s * math.sin(t)
        u[2] = z
    else:
        nrm = 0.0
        for i in range(d):
            state, a = _next_open_uniform(state)
            state, b = _next_uniform(state)
            g = math.sqrt(-2.0 * math.log(a)) * math.cos(2.0 * math.pi * b)
            u[i] = g
            nrm += g * g
        nrm = math.sqrt(max(nrm, 1e-300))
        for i in range(d):
            u[i] /= nrm
    return state


@njit(inline="always")
def _beta_complement_log(state, a):
    """log of V ~ Beta(1-a, a), via Johnk's method in log space (a in (0,1))."""
    for _ in range(10_000):
        state, u = _next_open_uniform(state)
        state, v = _next_open_uniform(state)
        lx = math.log(u) / (1.0 - a)  # log X, X ~ U^(1/(1-a))
        ly = math.log(v) / a
        m = lx if lx > ly else ly
        ls = m + math.log(math.exp(lx - m) + math.exp(ly - m))  # log(X + Y)
        if ls <= 0.0:
            return state, lx - ls
    return state, -0.6931471805599453  # unreachable fallback


@njit(inline="always")
def _stable_jump_factor(state, alpha):
    """Exit radius over ball radius for the stable walk: 1/sqrt(W), W ~ Beta(a/2, 1-a/2)."""
    state, log_v = _beta_complement_log(state, alpha / 2.0)
    log_v = min(log_v, 0.0)
    lw = math.log1p(-math.exp(log_v)) if log_v < -1e-17 else math.log(-log_v)
    # for log_v -> 0, 1 - V = -log_v * (1 + O(log_v)); cap the factor at 1e8
    factor = math.exp(-0.5 * lw)
    return state, min(factor, 1e8)


# ---------------------------------------------------------------------------
# obstacle distances
# ---------------------------------------------------------------------------


@njit(inline="always")
def _profile_radius(ptype, pa, pbeta, pgamma, r, cap):
    if ptype == PROFILE_CONSTANT:
        val = pa
    elif ptype == PROFILE_POWER:
        val = pa * r ** (-pbeta)
    else:
        val = pa * r ** (-pbeta) * math.log(math.e + r) ** (-pgamma)
    return val if val < cap else cap


@njit(inline="always")
def _lattice_distance(x, d, spacing, extent, cap, limit_sq, ptype, pa, pbeta, pgamma):
    """Obstacle distance for a lattice configuration (valid lower bound).

    Exact whenever below 1.5 * spacing - cap; conservative but positive
    elsewhere, so absorption decisions are always exact.
    """
    nx = 0.0
    for i in range(d):
        nx += x[i] * x[i]
    nx = math.sqrt(nx)
    if nx >= extent + spacing:
        return nx - extent - cap
    scale = 1.0 if nx <= extent else extent / nx
    best = 1.5 * spacing - cap
    n_off = 3**d
    for code in range(n_off):
        # decode the offset in base 3 and build the candidate lattice point
        c = code
        sq = 0.0
        dist2 = 0.0
        for i in range(d):
            o = (c % 3) - 1
            c //= 3
            zi = math.floor(x[i] * scale / spacing + 0.5) + o
            sq += zi * zi
            t = x[i] - zi * spacing
            dist2 += t * t
        if sq <= 0.0 or sq > limit_sq:
            continue
        r_z = _profile_radius(ptype, pa, pbeta, pgamma, math.sqrt(sq) * spacing, cap)
        surf = math.sqrt(dist2) - r_z
        if surf < best:
            best = surf
    return best


@njit(inline="always")
def _balls_distance(x, d, centers, radii, starts, ids, origin, dims, cell_h, r_max):
    """Exact distance to the nearest ball surface via the uniform grid index."""
    if len(radii) == 0:
        return np.inf
    # cell of x, clamped into the grid box; gap handling is folded into the
    # ring lower bound (k - 1) * cell_h, valid for clamped coordinates too
    best = np.inf
    kmax = 0
    for i in range(d):
        ci = int(math.floor((x[i] - origin[i]) / cell_h))
        span = dims[i]
        if ci < 0:
            ci = 0
        elif ci >= span:
            ci = span - 1
        if span > kmax:
            kmax = span
    for k in range(kmax + 1):
        if best <= (k - 1) * cell_h - r_max:
            break
        # enumerate cells at Chebyshev ring k around the clamped cell of x
        n_cells = 1
        for i in range(d):
            n_cells *= 2 * k + 1
        for code in range(n_cells):
            c = code
            cheb = 0
            flat = 0
            stride = 1
            ok = True
            for i in range(d):
                o = (c % (2 * k + 1)) - k
                c //= 2 * k + 1
                if abs(o) > cheb:
                    cheb = abs(o)
                ci = int(math.floor((x[i] - origin[i]) / cell_h))
                if ci < 0:
                    ci = 0
                elif ci >= dims[i]:
                    ci = dims[i] - 1
                ci += o
                if ci < 0 or ci >= dims[i]:
                    ok = False
                    break
                flat += ci * stride
                stride *= dims[i]
            if not ok or cheb != k:
                continue
            for j in range(starts[flat], starts[flat + 1]):
                b = ids[j]
                dist2 = 0.0
                for i in range(d):
                    t = x[i] - centers[b, i]
                    dist2 += t * t
                surf = math.sqrt(dist2) - radii[b]
                if surf < best:
                    best = surf
    return best


@njit(inline="always")
def _shell_distance(x, d, rho):
    nx = 0.0
    for i in range(d):
        nx += x[i] * x[i]
    nx = math.sqrt(nx)
    lo = rho - nx
    hi = nx - 3.0 * rho
    v = lo if lo > hi else hi
    return v if v > 0.0 else 0.0


@njit(inline="always")
def _distance(kind, x, d, centers, radii, starts, ids, origin, dims, cell_h, r_max,
              spacing, extent, cap, limit_sq, ptype, pa, pbeta, pgamma, rho):
    if kind == KIND_BALLS:
        return _balls_distance(x, d, centers, radii, starts, ids, origin, dims, cell_h, r_max)
    if kind == KIND_LATTICE:
        return _lattice_distance(x, d, spacing, extent, cap, limit_sq, ptype, pa, pbeta, pgamma)
    return _shell_distance(x, d, rho)


# ---------------------------------------------------------------------------
# walk kernels
# ---------------------------------------------------------------------------


@njit(nogil=True, cache=True)
def wos_range(kind, centers, radii, starts, ids, origin, dims, cell_h, r_max,
              spacing, extent, cap, limit_sq, ptype, pa, pbeta, pgamma, rho,
              x0, outer_M, tol, seed, t_lo, t_hi, max_steps):
    """Walk-on-spheres trials t_lo..t_hi; returns (hits, exits, timeouts)."""
    d = len(x0)
    x = np.empty(d)
    u = np.empty(d)
    hits = 0
    exits = 0
    timeouts = 0
    for t in range(t_lo, t_hi):
        state = _stream_init(seed, t)
        for i in range(d):
            x[i] = x0[i]
        resolved = False
        for _ in range(max_steps):
            d_t = _distance(kind, x, d, centers, radii, starts, ids, origin, dims,
                            cell_h, r_max, spacing, extent, cap, limit_sq,
                            ptype, pa, pbeta, pgamma, rho)
            if d_t <= tol:
                hits += 1
                resolved = True
                break
            nx = 0.0
            for i in range(d):
                nx += x[i] * x[i]
            d_o = outer_M - math.sqrt(nx)
            if d_o <= tol:
                exits += 1
                resolved = True
                break
            h = d_t if d_t < d_o else d_o
            state = _unit_step(state, u, d)
            for i in range(d):
                x[i] += h * u[i]
        if not resolved:
            timeouts += 1
    return hits, exits, timeouts


@njit(nogil=True, cache=True)
def stable_range(kind, centers, radii, starts, ids, origin, dims, cell_h, r_max,
                 spacing, extent, cap, limit_sq, ptype, pa, pbeta, pgamma, rho,
                 x0, outer_M, alpha, tol, seed, t_lo, t_hi, max_steps):
    """Jump-adapted stable walk trials t_lo..t_hi; returns (hits, exits, timeouts).

    Landing inside a ball is a hit (distance check comes first); landing
    outside B(0, outer_M) is an exit; jumps are never capped by the outer
    boundary.
    """
    d = len(x0)
    x = np.empty(d)
    u = np.empty(d)
    hits = 0
    exits = 0
    timeouts = 0
    for t in range(t_lo, t_hi):
        state = _stream_init(seed, t)
        for i in range(d):
            x[i] = x0[i]
        resolved = False
        for _ in range(max_steps):
            d_t = _distance(kind, x, d, centers, radii, starts, ids, origin, dims,
                            cell_h, r_max, spacing, extent, cap, limit_sq,
                            ptype, pa, pbeta, pgamma, rho)
            if d_t <= tol:
                hits += 1
                resolved = True
                break
            nx = 0.0
            for i in range(d):
                nx += x[i] * x[i]
            if math.sqrt(nx) >= outer_M:
                exits += 1
                resolved = True
                break
            state, factor = _stable_jump_factor(state, alpha)
            jump = d_t * factor
            state = _unit_step(state, u, d)
            for i in range(d):
                x[i] += jump * u[i]
        if not resolved:
            timeouts += 1
    return hits, exits, timeouts


# ---------------------------------------------------------------------------
# obstacle packing
# ---------------------------------------------------------------------------

_EMPTY_F2 = np.zeros((0, 1))
_EMPTY_F1 = np.zeros(0)
_EMPTY_I1 = np.zeros(1, dtype=np.int64)
_EMPTY_DIMS = np.ones(1, dtype=np.int64)


def _build_grid(centers, radii):
    """Uniform-grid CSR index over ball centers."""
    n, d = centers.shape
    r_max = float(radii.max())
    lo = centers.min(axis=0)
    hi = centers.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    # aim for O(1) balls per cell without letting thin dimensions explode
    cell_h = max(float(span.max()) / max(int(round(n ** (1.0 / d))), 1), 2.0 * r_max, 1e-12)
    dims = np.maximum((span / cell_h).astype(np.int64) + 1, 1)
    idx = np.floor((centers - lo) / cell_h).astype(np.int64)
    idx = np.minimum(idx, dims - 1)
    strides = np.cumprod(np.concatenate([[1], dims[:-1]]))
    flat = (idx * strides).sum(axis=1)
    order = np.argsort(flat, kind="stable")
    counts = np.bincount(flat, minlength=int(dims.prod()))
    starts = np.zeros(len(counts) + 1, dtype=np.int64)
    np.cumsum(counts, out=starts[1:])
    return (
        np.ascontiguousarray(centers),
        np.ascontiguousarray(radii),
        starts,
        order.astype(np.int64),
        lo.astype(float),
        dims,
        float(cell_h),
        r_max,
    )


class PackedObstacle:
    """Numba-ready argument tuple for one obstacle geometry."""

    def __init__(self, args, min_radius):
        self.args = args
        self.min_radius = min_radius

    @classmethod
    def from_config(cls, config):
        from .config import (
            RADIUS_CLIP_FACTOR,
            ConstantProfile,
            PowerLawProfile,
            PowerLogProfile,
        )

        min_radius = float(config.radii.min()) if len(config) else None
        if config.generator == "lattice" and config.profile is not None and config.spacing:
            prof = config.profile
            if isinstance(prof, ConstantProfile):
                ptype, pa, pbeta, pgamma = PROFILE_CONSTANT, prof.a, 0.0, 0.0
            elif isinstance(prof, PowerLawProfile):
                ptype, pa, pbeta, pgamma = PROFILE_POWER, prof.a, prof.beta, 0.0
            elif isinstance(prof, PowerLogProfile):
                ptype, pa, pbeta, pgamma = PROFILE_POWERLOG, prof.a, prof.beta, prof.gamma
            else:
                raise SimulationError(f"unsupported profile {type(prof).__name__}")
            s = float(config.spacing)
            args = (
                KIND_LATTICE, _EMPTY_F2, _EMPTY_F1, _EMPTY_I1, _EMPTY_I1,
                _EMPTY_F1, _EMPTY_DIMS, 1.0, 0.0,
                s, float(config.extent), RADIUS_CLIP_FACTOR * s,
                (config.extent / s) ** 2 * (1 + 1e-12),
                ptype, float(pa), float(pbeta), float(pgamma), 0.0,
            )
            return cls(args, min_radius)
        if len(config) == 0:
            args = (
                KIND_BALLS, _EMPTY_F2, _EMPTY_F1, _EMPTY_I1, _EMPTY_I1,
                _EMPTY_F1, _EMPTY_DIMS, 1.0, 0.0,
                1.0, 0.0, 0.0, 0.0, 0, 1.0, 0.0, 0.0, 0.0,
            )
            return cls(args, min_radius)
        centers, radii, starts, ids, origin, dims, cell_h, r_max = _build_grid(
            config.centers, config.radii
        )
        args = (
            KIND_BALLS, centers, radii, starts, ids, origin, dims, cell_h, r_max,
            1.0, 0.0, 0.0, 0.0, 0, 1.0, 0.0, 0.0, 0.0,
        )
        return cls(args, min_radius)

    @classmethod
    def shell(cls, rho):
        args = (
            KIND_SHELL, _EMPTY_F2, _EMPTY_F1, _EMPTY_I1, _EMPTY_I1,
            _EMPTY_F1, _EMPTY_DIMS, 1.0, 0.0,
            1.0, 0.0, 0.0, 0.0, 0, 1.0, 0.0, 0.0, float(rho),
        )
        return cls(args, float(rho))

    def distance(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.empty(len(pts))
        for i, p in enumerate(pts):
            out[i] = obstacle_distance_py(self.args, p)
        return out


def obstacle_distance_py(args, x):
    """Scalar obstacle distance through the compiled routine (for validation)."""
    return _distance_entry(*args, np.asarray(x, dtype=float))


@njit(nogil=True, cache=True)
def _distance_entry(kind, centers, radii, starts, ids, origin, dims, cell_h, r_max,
                    spacing, extent, cap, limit_sq, ptype, pa, pbeta, pgamma, rho, x):
    return _distance(kind, x, len(x), centers, radii, starts, ids, origin, dims,
                     cell_h, r_max, spacing, extent, cap, limit_sq,
                     ptype, pa, pbeta, pgamma, rho)
