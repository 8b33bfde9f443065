"""Machines x equations: boundedness, minimum orders, utilization, datasets.

Stencil sizes are odd (symmetric stencils) and map to spatial orders via
k = order + 1; order scans run over even orders 2..64.  Beyond order 64 the
infinite-cache traffic model stops being meaningful, so searches report
"never" (None) instead of extrapolating.
"""

from dataclasses import dataclass
from typing import Optional

from .equations import EquationSpec, kernel_flops, operational_intensity
from .errors import ValidationError
from .formatting import csv_line
from .machines import (
    MachineSpec,
    attainable_performance,
    classify_boundedness,
    ridge_point,
)

MAX_ORDER = 64


def order_to_k(order: int) -> int:
    if order < 2 or order % 2 != 0:
        raise ValidationError(f"spatial order must be even and >= 2, got {order}")
    return order + 1


@dataclass(frozen=True)
class RooflinePoint:
    """One algorithm pinned against one machine's roofline."""

    label: str
    oi: float
    attainable_gflops: float
    bound: str  # "memory" | "compute"
    k: Optional[int] = None
    measured_gflops: Optional[float] = None


@dataclass(frozen=True)
class UtilizationReport:
    achieved_gflops: float
    attainable_gflops: float

    @property
    def utilization(self) -> float:
        return self.achieved_gflops / self.attainable_gflops

    @property
    def headroom_factor(self) -> float:
        return self.attainable_gflops / self.achieved_gflops


def min_compute_bound_order(eq: EquationSpec, machine: MachineSpec,
                            max_order: int = MAX_ORDER) -> Optional[int]:
    """Smallest even spatial order whose OI reaches the machine's ridge point.

    Returns None ("never") when no order up to max_order qualifies.
    """
    imin = ridge_point(machine)
    for order in range(2, max_order + 1, 2):
        oi = operational_intensity(eq, order + 1, machine.precision_bytes).oi
        if float(oi) >= imin:
            return order
    return None


def achieved_gflops(eq: EquationSpec, k: int, grid_points: float,
                    time_steps: int, runtime_s: float) -> float:
    """Measured performance: total kernel FLOPs divided by wall time."""
    if grid_points <= 0 or time_steps <= 0:
        raise ValidationError("grid_points and time_steps must be positive")
    if runtime_s == 0:
        raise ZeroDivisionError("runtime_s must be non-zero")
    if runtime_s < 0:
        raise ValidationError(f"runtime_s must be positive, got {runtime_s}")
    return grid_points * kernel_flops(eq, k) * time_steps / runtime_s / 1e9


def utilization(achieved: float, machine: MachineSpec, oi: float) -> UtilizationReport:
    """How much of the roofline bound at this OI the measurement reached."""
    if achieved <= 0:
        raise ValidationError(f"achieved GFLOPS must be positive, got {achieved}")
    return UtilizationReport(achieved, attainable_performance(machine, oi))


@dataclass(frozen=True)
class OISeries:
    equation: str
    points: tuple  # ((k, oi_float), ...) over odd k


@dataclass(frozen=True)
class OICurveSet:
    series: tuple
    ridge_markers: tuple  # ((machine name, I_min), ...)


def oi_curve(eqs, k_min: int = 3, k_max: int = 33, machines=(),
             precision_bytes: int = 4) -> OICurveSet:
    """OI as a function of stencil size, over odd k, per equation.

    Machines contribute horizontal ridge-point markers for reading off
    minimum compute-bound stencil sizes.
    """
    if not 2 <= k_min <= k_max <= MAX_ORDER:
        raise ValidationError(f"k range [{k_min}, {k_max}] outside [2, {MAX_ORDER}]")
    start = k_min if k_min % 2 == 1 else k_min + 1
    series = []
    for eq in eqs:
        pts = tuple(
            (k, float(operational_intensity(eq, k, precision_bytes).oi))
            for k in range(start, k_max + 1, 2)
        )
        series.append(OISeries(eq.name, pts))
    markers = tuple((m.name, ridge_point(m)) for m in machines)
    return OICurveSet(tuple(series), markers)


@dataclass(frozen=True)
class RooflineDataset:
    """A machine's roof plus the points pinned against it.

    `roof_segments` holds the two polyline segments meeting at the ridge:
    the bandwidth slope and the flat compute roof, over [oi_lo, oi_hi].
    """

    machine: MachineSpec
    points: tuple
    oi_lo: float
    oi_hi: float

    @property
    def ridge(self) -> float:
        return ridge_point(self.machine)

    @property
    def roof_segments(self):
        b = self.machine.peak_bw_achievable
        f = self.machine.peak_gflops_achievable
        ridge = self.ridge
        slope = ((self.oi_lo, self.oi_lo * b), (ridge, f))
        flat = ((ridge, f), (self.oi_hi, f))
        return slope, flat

    def inconsistencies(self, tolerance: float = 0.05):
        """Points whose measurement exceeds the model bound by more than
        `tolerance` (relative).  Flags model/measurement mismatch; not an error."""
        bad = []
        for p in self.points:
            if p.measured_gflops is None:
                continue
            if p.measured_gflops > p.attainable_gflops * (1.0 + tolerance):
                bad.append(p)
        return bad

    def to_csv(self) -> str:
        lines = ["label,k,oi,attainable_gflops,bound,measured_gflops"]
        for p in self.points:
            lines.append(
                csv_line([p.label, p.k, p.oi, p.attainable_gflops, p.bound,
                          p.measured_gflops])
            )
        return "\n".join(lines) + "\n"


def roofline_point(machine: MachineSpec, eq: EquationSpec, k: int,
                   measured_gflops: Optional[float] = None,
                   label: Optional[str] = None) -> RooflinePoint:
    oi = float(operational_intensity(eq, k, machine.precision_bytes).oi)
    return RooflinePoint(
        label=label or f"{eq.name}:k{k}",
        oi=oi,
        attainable_gflops=attainable_performance(machine, oi),
        bound=classify_boundedness(machine, oi),
        k=k,
        measured_gflops=measured_gflops,
    )


def roofline_dataset(machine: MachineSpec, points) -> RooflineDataset:
    """Build the dataset for one machine.

    `points` is an iterable of (equation, k[, measured[, label]]) tuples.
    The OI axis range always covers the ridge point, one decade of margin
    on each side, and every requested point.
    """
    rps = []
    for entry in points:
        eq, k = entry[0], entry[1]
        measured = entry[2] if len(entry) > 2 else None
        label = entry[3] if len(entry) > 3 else None
        rps.append(roofline_point(machine, eq, k, measured, label))
    ridge = ridge_point(machine)
    ois = [p.oi for p in rps] + [ridge]
    return RooflineDataset(
        machine=machine,
        points=tuple(rps),
        oi_lo=min(ois) / 10.0,
        oi_hi=max(ois) * 10.0,
    )
