"""Cost-to-solution estimation: stability + dispersion + roofline combined.

For a fixed physical problem, raising the spatial order shrinks the grid
(fewer points per wavelength are needed) but tightens the stable time step
(the Laplacian weight sum a2 grows).  Coupling both effects with the
per-order operational intensity yields an estimated optimal runtime per
machine for every discretization order.

Everything that feeds a ceiling (time-step counts, runtimes) is computed
in exact rational arithmetic; floats are only produced for display.
"""

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .equations import (
    BUILTIN_EQUATIONS,
    EquationSpec,
    kernel_flops,
    operational_intensity,
)
from .errors import ValidationError
from .formatting import csv_line
from .machines import attainable_performance, _load_documents
from .stencils import fd_weights

DEFAULT_P_BREAKPOINTS = {2: 6, 6: 5, 12: 4, 18: 3, 24: 2}
DEFAULT_ORDERS = (2, 6, 12, 18, 24)


def _dec(x) -> Fraction:
    return Fraction(str(x))


@dataclass(frozen=True)
class CostScenario:
    """Fixed physical problem for the cost sweep.

    The base order pins the normalization: its grid spacing is 1 and its
    step count is base_nt; every other order must cover the same physical
    volume and final time.
    """

    domain_extent: int = 500  # grid points per dimension at the base order
    base_order: int = 2
    base_p: float = 6.0  # points per wavelength at the base order
    p_breakpoints: dict = field(default_factory=lambda: dict(DEFAULT_P_BREAKPOINTS))
    a1: float = 4.0  # weight sum of the second-order time stencil |1,-2,1|
    v_max: float = 1.0
    base_nt: int = 1000
    dims: int = 3

    def __post_init__(self):
        if self.domain_extent <= 0 or self.base_nt < 1 or self.dims < 1:
            raise ValidationError("domain_extent, base_nt and dims must be positive")
        if self.a1 <= 0 or self.v_max <= 0 or self.base_p <= 0:
            raise ValidationError("a1, v_max and base_p must be positive")
        if not self.p_breakpoints:
            raise ValidationError("p_breakpoints must not be empty")
        if self.base_order not in self.p_breakpoints:
            raise ValidationError(
                f"base order {self.base_order} missing from p_breakpoints"
            )
        prev = None
        for order in sorted(self.p_breakpoints):
            p = self.p_breakpoints[order]
            if p <= 0:
                raise ValidationError(f"p at order {order} must be positive")
            if prev is not None and p > prev:
                raise ValidationError("p must be non-increasing with order")
            prev = p

    @property
    def order_span(self):
        orders = sorted(self.p_breakpoints)
        return orders[0], orders[-1]


def points_per_wavelength(scenario: CostScenario, order) -> float:
    """Breakpoint value, or linear interpolation between breakpoints."""
    return float(_p_exact(scenario, order))


def _p_exact(scenario: CostScenario, order) -> Fraction:
    bp = scenario.p_breakpoints
    if order in bp:
        return _dec(bp[order])
    lo, hi = scenario.order_span
    if not lo <= order <= hi:
        raise ValidationError(
            f"order {order} outside the breakpoint span [{lo}, {hi}]"
        )
    orders = sorted(bp)
    left = max(o for o in orders if o < order)
    right = min(o for o in orders if o > order)
    p_l, p_r = _dec(bp[left]), _dec(bp[right])
    return p_l + (p_r - p_l) * (Fraction(order) - left) / (right - left)


def grid_spacing(scenario: CostScenario, order) -> float:
    """Dispersion-limited spacing, normalized to the base order: h = base_p / p."""
    return float(_h_exact(scenario, order))


def _h_exact(scenario: CostScenario, order) -> Fraction:
    return _dec(scenario.base_p) / _p_exact(scenario, order)


def _a2_exact(scenario: CostScenario, order) -> Fraction:
    return scenario.dims * fd_weights(2, order).abs_sum()


def stable_dt(scenario: CostScenario, order: int) -> float:
    """Largest stable time step: dt = h * sqrt(a1 / a2) / v_max."""
    h = _h_exact(scenario, order)
    ratio = _dec(scenario.a1) / _a2_exact(scenario, order)
    return float(h) * math.sqrt(float(ratio)) / float(_dec(scenario.v_max))


def _ceil_sqrt(fr: Fraction) -> int:
    """Smallest integer n with n*n >= fr, exact."""
    if fr <= 0:
        return 0
    n = math.isqrt(fr.numerator // fr.denominator)
    while n * n < fr:
        n += 1
    while n > 0 and (n - 1) * (n - 1) >= fr:
        n -= 1
    return n


@dataclass(frozen=True)
class MachineCost:
    machine: str
    predicted_gflops: float  # oi * B_achievable, deliberately uncapped
    attainable_gflops: float  # roofline-capped bound at the same oi
    runtime_s: int  # ceil(total_gflops / predicted_gflops)


@dataclass(frozen=True)
class CostRow:
    order: int
    a2: float
    p: float
    h: float
    dt: float
    n_grid: float  # real-valued total grid points (volume / h^dims)
    n_t: int
    oi: float
    total_gflops: float
    machine_costs: tuple


def scenario_table(scenario: CostScenario, orders=DEFAULT_ORDERS, machines=(),
                   equation: Optional[EquationSpec] = None,
                   precision_bytes: int = 4) -> list:
    """One CostRow per order; per-machine runtimes use the uncapped oi * B.

    The stability constants are validated for the scalar acoustic setup;
    passing another equation is accepted but warns.
    """
    if equation is None:
        equation = BUILTIN_EQUATIONS["acoustic"]
    elif equation.name != "acoustic":
        warnings.warn(
            f"cost model stability constants assume the acoustic kernel; "
            f"results for '{equation.name}' are extrapolations",
            stacklevel=2,
        )
    if not orders:
        raise ValidationError("orders must be a non-empty list of even orders")

    a2_base = _a2_exact(scenario, scenario.base_order)
    h_base = _h_exact(scenario, scenario.base_order)
    extent = Fraction(scenario.domain_extent)
    rows = []
    for order in orders:
        if order % 2 != 0 or order < 2:
            raise ValidationError(f"spatial order must be even and >= 2, got {order}")
        k = order + 1
        a2 = _a2_exact(scenario, order)
        h = _h_exact(scenario, order)
        n_grid = (extent * h_base / h) ** scenario.dims
        # n_t = ceil(base_nt * dt_base / dt); the ratio is
        # (h_base / h) * sqrt(a2 / a2_base), so square it and take an
        # exact integer square-root ceiling.
        ratio_sq = (Fraction(scenario.base_nt) * h_base / h) ** 2 * a2 / a2_base
        n_t = _ceil_sqrt(ratio_sq)
        oi = operational_intensity(equation, k, precision_bytes).oi
        total = Fraction(kernel_flops(equation, k)) * n_grid * n_t / 10**9
        costs = []
        for m in machines:
            bw = _dec(m.peak_bw_achievable)
            predicted = oi * bw
            costs.append(
                MachineCost(
                    machine=m.name,
                    predicted_gflops=float(predicted),
                    attainable_gflops=attainable_performance(m, float(oi)),
                    runtime_s=math.ceil(total / predicted),
                )
            )
        rows.append(
            CostRow(
                order=order,
                a2=float(a2),
                p=float(_p_exact(scenario, order)),
                h=float(h),
                dt=stable_dt(scenario, order),
                n_grid=float(n_grid),
                n_t=n_t,
                oi=float(oi),
                total_gflops=float(total),
                machine_costs=tuple(costs),
            )
        )
    return rows


def cost_csv(rows) -> str:
    """CSV export; machine columns appear in the rows' machine order."""
    if not rows:
        return "order,a2,p,h,dt,N,nt,oi,total_gflops\n"
    header = ["order", "a2", "p", "h", "dt", "N", "nt", "oi", "total_gflops"]
    for mc in rows[0].machine_costs:
        header.append(f"{mc.machine}_gflops")
        header.append(f"{mc.machine}_runtime_s")
    lines = [",".join(header)]
    for r in rows:
        values = [r.order, r.a2, r.p, r.h, r.dt, r.n_grid, r.n_t, r.oi, r.total_gflops]
        for mc in r.machine_costs:
            values.append(mc.predicted_gflops)
            values.append(mc.runtime_s)
        lines.append(csv_line(values))
    return "\n".join(lines) + "\n"


_SCENARIO_KEYS = {
    "domain_extent",
    "base_order",
    "base_p",
    "p_breakpoints",
    "a1",
    "v_max",
    "base_nt",
    "dims",
}


def load_scenario(path) -> CostScenario:
    """Read a scenario file (YAML mapping mirroring CostScenario fields)."""
    docs = _load_documents(path)
    if len(docs) != 1 or not isinstance(docs[0], dict):
        raise ValidationError(f"{path}: scenario file must hold one mapping")
    doc = docs[0]
    unknown = set(doc) - _SCENARIO_KEYS
    if unknown:
        raise ValidationError(f"{path}: unknown scenario keys: {sorted(unknown)}")
    if "p_breakpoints" in doc:
        bp = doc["p_breakpoints"]
        if not isinstance(bp, dict):
            raise ValidationError(f"{path}: p_breakpoints must be a mapping")
        doc = dict(doc, p_breakpoints={int(k): v for k, v in bp.items()})
    return CostScenario(**doc)
