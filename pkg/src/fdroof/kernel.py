"""Naive reference implementation of acoustic leapfrog time stepping.

The update is the conventional second-order-in-time scheme
    u(t) = 2 u(t-1) - u(t-2) + dt^2 / m * Lap_h u(t-1)
with an axis-aligned star Laplacian of configurable order and a
zero-Dirichlet halo (no absorbing boundaries: the halo stays exactly zero).
Three time levels are kept and rotated by reference, so exactly four field
values move per grid point per step, matching the acoustic traffic model.

The per-axis stencil folds symmetric weight pairs, w0*u + sum wj*(u+ + u-),
which makes mirrored grids produce bit-identical mirrored results and keeps
slab-decomposed runs bit-identical to whole-grid runs.
"""

import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analysis import RooflinePoint, roofline_point
from .equations import BUILTIN_EQUATIONS, kernel_flops
from .errors import ValidationError
from .machines import MachineSpec
from .stencils import fd_weights, stencil_geometry


class StabilityWarning(UserWarning):
    """Configured time step exceeds the CFL bound."""


def max_stable_dt(order: int, h: float, m=1.0) -> float:
    """CFL bound dt <= h * sqrt(a1/a2) / v_max for the leapfrog scheme.

    a1 = 4 is the weight sum of the second-order time stencil; v_max comes
    from the squared slowness as 1/sqrt(min m).
    """
    a2 = float(3 * fd_weights(2, order).abs_sum())
    m_min = float(np.min(m))
    if m_min <= 0:
        raise ValidationError("squared slowness must be positive")
    v_max = 1.0 / math.sqrt(m_min)
    return h * math.sqrt(4.0 / a2) / v_max


@dataclass(frozen=True)
class Source:
    """Point source: additive time series q injected at one interior point."""

    location: tuple
    series: np.ndarray


@dataclass
class KernelConfig:
    order: int
    dims: tuple  # interior grid points per axis (nx, ny, nz)
    n_t: int
    dt: float
    h: float = 1.0
    m: object = 1.0  # squared slowness: scalar or interior-shaped array
    source: Optional[Source] = None

    def __post_init__(self):
        if self.order < 2 or self.order % 2 != 0:
            raise ValidationError(f"order must be even and >= 2, got {self.order}")
        if len(self.dims) != 3 or any(d < 1 for d in self.dims):
            raise ValidationError(f"dims must be three positive extents, got {self.dims}")
        if self.n_t < 0 or self.dt <= 0 or self.h <= 0:
            raise ValidationError("n_t must be >= 0 and dt, h positive")
        halo = self.order // 2
        if any(d < 2 * halo + 1 for d in self.dims):
            raise ValidationError(
                f"interior dims {self.dims} too small for halo width {halo}"
            )
        if not np.isscalar(self.m) and np.shape(self.m) != tuple(self.dims):
            raise ValidationError("squared-slowness grid must match interior dims")
        if self.source is not None:
            loc = self.source.location
            if len(loc) != 3 or any(not 0 <= c < d for c, d in zip(loc, self.dims)):
                raise ValidationError(f"source location {loc} outside interior")
        bound = max_stable_dt(self.order, self.h, self.m)
        if self.dt > bound * (1.0 + 1e-12):
            # Instability is demonstrable behaviour, so proceed anyway.
            warnings.warn(
                f"dt={self.dt:g} exceeds the CFL bound {bound:g}; "
                "the scheme will be unstable",
                StabilityWarning,
                stacklevel=2,
            )

    @property
    def halo(self) -> int:
        return self.order // 2

    @property
    def k(self) -> int:
        return self.order + 1


@dataclass
class Wavefield:
    """Three zero-padded time levels, rotated by reference between steps.

    grids[2] is the latest level u(t-1) entering the next update, grids[1]
    the one before it (u(t-2)), and grids[0] a scratch buffer (the retired
    oldest level) that receives the new u(t).  `it` counts completed steps
    and indexes the source series.
    """

    halo: int
    grids: list
    it: int = 0

    @classmethod
    def allocate(cls, dims, halo: int) -> "Wavefield":
        if any(d < 2 * halo + 1 for d in dims):
            raise ValidationError(f"dims {dims} too small for halo width {halo}")
        padded = tuple(d + 2 * halo for d in dims)
        return cls(halo, [np.zeros(padded, dtype=np.float32) for _ in range(3)])

    @property
    def dims(self):
        r = self.halo
        return tuple(d - 2 * r for d in self.grids[0].shape)

    def interior(self, level: int = 2) -> np.ndarray:
        r = self.halo
        sl = tuple(slice(r, s - r) for s in self.grids[level].shape)
        return self.grids[level][sl]

    def halo_is_zero(self) -> bool:
        r = self.halo
        if r == 0:
            return True
        mask = np.ones(self.grids[0].shape, dtype=bool)
        sl = tuple(slice(r, s - r) for s in self.grids[0].shape)
        mask[sl] = False
        return all(not g[mask].any() for g in self.grids)


def _check_match(fld: Wavefield, cfg: KernelConfig):
    if fld.halo != cfg.halo or fld.dims != tuple(cfg.dims):
        raise ValidationError(
            f"wavefield (dims {fld.dims}, halo {fld.halo}) does not match "
            f"config (dims {tuple(cfg.dims)}, halo {cfg.halo})"
        )


def _window(shape, halo, x_lo, x_hi, axis=None, offset=0):
    """Interior window restricted to the x-slab [x_lo, x_hi), optionally
    shifted by `offset` along `axis`."""
    sl = []
    for ax, size in enumerate(shape):
        lo, hi = halo, size - halo
        if ax == 0:
            lo, hi = halo + x_lo, halo + x_hi
        if ax == axis:
            lo, hi = lo + offset, hi + offset
        sl.append(slice(lo, hi))
    return tuple(sl)


def _inject_source(fld: Wavefield, cfg: KernelConfig):
    src = cfg.source
    if src is None or fld.it >= len(src.series):
        return
    r = fld.halo
    x, y, z = (c + r for c in src.location)
    fld.grids[2][x, y, z] += np.float32(src.series[fld.it])


def step(fld: Wavefield, cfg: KernelConfig, slabs: int = 1) -> Wavefield:
    """Advance one time step in place; returns the same Wavefield.

    With slabs > 1 the interior is split into x-slabs computed in a thread
    pool; outputs are written to disjoint regions, so the result is
    bit-identical to the single-slab run.
    """
    _check_match(fld, cfg)
    r = cfg.halo
    w = fd_weights(2, cfg.order).as_floats()
    scratch, prev, cur = fld.grids
    coef = np.float32(cfg.dt * cfg.dt / (cfg.h * cfg.h))
    m_grid = None if np.isscalar(cfg.m) else np.asarray(cfg.m, dtype=np.float32)
    m_scalar = np.float32(cfg.m) if np.isscalar(cfg.m) else None
    nx = fld.dims[0]
    slabs = max(1, min(int(slabs), nx))
    bounds = [(i * nx // slabs, (i + 1) * nx // slabs) for i in range(slabs)]

    def run_slab(span):
        x_lo, x_hi = span
        if x_lo >= x_hi:
            return
        core = _window(cur.shape, r, x_lo, x_hi)
        lap = np.float32(3.0 * w[r]) * cur[core]
        for axis in range(3):
            for j in range(1, r + 1):
                wj = np.float32(w[r + j])
                plus = _window(cur.shape, r, x_lo, x_hi, axis, j)
                minus = _window(cur.shape, r, x_lo, x_hi, axis, -j)
                lap += wj * (cur[plus] + cur[minus])
        scaled = coef * lap
        if m_grid is not None:
            scaled = scaled / m_grid[x_lo:x_hi]
        elif m_scalar != np.float32(1.0):
            scaled = scaled / m_scalar
        scratch[core] = (2.0 * cur[core] - prev[core]) + scaled

    if slabs == 1:
        run_slab(bounds[0])
    else:
        with ThreadPoolExecutor(max_workers=slabs) as pool:
            list(pool.map(run_slab, bounds))

    fld.grids = [prev, cur, scratch]
    _inject_source(fld, cfg)
    fld.it += 1
    return fld


def oracle_step(fld: Wavefield, cfg: KernelConfig) -> Wavefield:
    """Same update via explicit convolution with the enumerated star geometry.

    Independent verification path for `step`: weights come from the 3D
    stencil enumeration and are accumulated in double precision over a
    single merged loop, then cast back to single precision.  Intended for
    small grids (oracle use only).
    """
    _check_match(fld, cfg)
    if any(d > 32 for d in fld.dims):
        raise ValidationError("oracle_step is restricted to grids of at most 32^3")
    r = cfg.halo
    geo = stencil_geometry("star", cfg.k)
    scratch, prev, cur = fld.grids
    src = cur.astype(np.float64)
    nx, ny, nz = fld.dims
    acc = np.zeros(fld.dims, dtype=np.float64)
    for dx, dy, dz, wt in geo.points:
        acc += float(wt) * src[
            r + dx : r + dx + nx, r + dy : r + dy + ny, r + dz : r + dz + nz
        ]
    coef = float(cfg.dt) ** 2 / float(cfg.h) ** 2
    m = cfg.m if np.isscalar(cfg.m) else np.asarray(cfg.m, dtype=np.float64)
    core = tuple(slice(r, r + n) for n in fld.dims)
    updated = 2.0 * src[core] - prev[core].astype(np.float64) + coef * acc / m
    scratch[core] = updated.astype(np.float32)
    fld.grids = [prev, cur, scratch]
    _inject_source(fld, cfg)
    fld.it += 1
    return fld


@dataclass(frozen=True)
class BenchResult:
    measured_gflops: float
    point: RooflinePoint
    wall_time_s: float
    total_flops: float
    wavefield: Wavefield


def run_benchmark(cfg: KernelConfig, machine: MachineSpec, slabs: int = 1,
                  seed: int = 0) -> BenchResult:
    """Run n_t steps, time them, and pin the measurement on the roofline.

    Measured GFLOPS = interior points x kernel FLOPs/point x steps / wall
    time, with the FLOP count taken from the acoustic cost model (the OI,
    and hence the roofline position, is independent of the grid size).
    """
    if cfg.n_t < 1:
        raise ValidationError("benchmark needs n_t >= 1")
    fld = Wavefield.allocate(cfg.dims, cfg.halo)
    if cfg.source is None:
        # Deterministic non-zero start so the kernel works on real data.
        rng = np.random.default_rng(seed)
        fld.interior(2)[...] = rng.standard_normal(cfg.dims).astype(np.float32) * 1e-3
    t0 = time.perf_counter()
    for _ in range(cfg.n_t):
        step(fld, cfg, slabs=slabs)
    wall = time.perf_counter() - t0
    n_interior = float(np.prod(cfg.dims))
    acoustic = BUILTIN_EQUATIONS["acoustic"]
    total = n_interior * kernel_flops(acoustic, cfg.k) * cfg.n_t
    measured = total / wall / 1e9
    point = roofline_point(machine, acoustic, cfg.k, measured_gflops=measured)
    return BenchResult(measured, point, wall, total, fld)


def dump_wavefield(fld: Wavefield, path):
    """Write the current level as little-endian float32, x-fastest order,
    with a one-line `nx ny nz` sidecar at <path>.dims."""
    data = np.asarray(fld.interior(2), dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(data.tobytes(order="F"))
    nx, ny, nz = fld.dims
    with open(f"{path}.dims", "w", encoding="utf-8") as fh:
        fh.write(f"{nx} {ny} {nz}\n")
