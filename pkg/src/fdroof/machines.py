"""Hardware targets: peak-rate derivation, registry and the roofline function.

A machine is characterised by peak memory bandwidth and peak floating point
throughput.  Theoretical peaks can be derived from architectural parameters
(SIMD width, FMA, cores, clock; memory transfer rate, channels, bus width);
achievable peaks are measured values and drive the attainable-performance
roof min(oi * B, F) and the ridge point I_min = F / B.

The built-in registry ships three targets used throughout the cost and
minimum-order analyses.  Registry files (YAML, one document per machine)
may add new machines or override built-ins by name.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import yaml

from .errors import (
    AchievableRatesUnknownError,
    RegistryConflictError,
    RegistryParseError,
    ValidationError,
)

# Default fraction of a theoretical peak assumed reachable when a registry
# entry supplies no measured rates.
ACHIEVABLE_FRACTION_HINT = 0.8


def _decimal(x) -> Fraction:
    """Exact decimal reading of a user-supplied rate (2.7 -> 27/10)."""
    return Fraction(str(x))


@dataclass(frozen=True)
class ArchParams:
    """Core-side parameters from which the theoretical GFLOPS peak follows."""

    simd_lanes_sp: int  # single-precision lanes per instruction
    fma_ops_per_cycle: int  # 2 with fused multiply-add, 1 without
    cores: int
    sockets: int
    clock_ghz: float

    def __post_init__(self):
        for name in ("simd_lanes_sp", "fma_ops_per_cycle", "cores", "sockets", "clock_ghz"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"ArchParams.{name} must be positive")
        if self.fma_ops_per_cycle not in (1, 2):
            raise ValidationError("fma_ops_per_cycle must be 1 or 2")


@dataclass(frozen=True)
class MemParams:
    """Memory-side parameters from which the theoretical GB/s peak follows."""

    transfer_rate_mts: float  # mega-transfers per second
    channels: int
    bytes_per_channel: int
    sockets: int

    def __post_init__(self):
        for name in ("transfer_rate_mts", "channels", "bytes_per_channel", "sockets"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"MemParams.{name} must be positive")


def theoretical_peak_flops(arch: ArchParams) -> float:
    """lanes x fma x cores x sockets x clock, in GFLOPS.

    Evaluated in exact decimal arithmetic so that e.g. the 8x2x12x2x2.7
    product is exactly 1036.8 rather than a float-rounding neighbour.
    """
    exact = (
        arch.simd_lanes_sp
        * arch.fma_ops_per_cycle
        * arch.cores
        * arch.sockets
        * _decimal(arch.clock_ghz)
    )
    return float(exact)


def theoretical_peak_bandwidth(mem: MemParams) -> float:
    """transfer rate x channels x bytes x sockets, in GB/s."""
    exact = (
        _decimal(mem.transfer_rate_mts)
        * mem.channels
        * mem.bytes_per_channel
        * mem.sockets
        / 1000
    )
    return float(exact)


@dataclass(frozen=True)
class MachineSpec:
    """One hardware target.

    Achievable rates are first-class measured values, not percentages of the
    theoretical peaks; the ridge point and the roofline use them.  Entries
    loaded from files with only theoretical rates get achievable rates
    defaulted to ACHIEVABLE_FRACTION_HINT of theoretical (noted in `notes`).
    """

    name: str
    peak_gflops_achievable: Optional[float] = None
    peak_bw_achievable: Optional[float] = None
    peak_gflops_theoretical: Optional[float] = None
    peak_bw_theoretical: Optional[float] = None
    precision_bytes: int = 4
    notes: str = ""
    arch: Optional[ArchParams] = None
    mem: Optional[MemParams] = None

    def __post_init__(self):
        if not self.name:
            raise ValidationError("machine name must be non-empty")
        for attr in (
            "peak_gflops_achievable",
            "peak_bw_achievable",
            "peak_gflops_theoretical",
            "peak_bw_theoretical",
        ):
            v = getattr(self, attr)
            if v is not None and v <= 0:
                raise ValidationError(f"{self.name}: {attr} must be positive, got {v}")
        if self.precision_bytes not in (4, 8):
            raise ValidationError(
                f"{self.name}: precision_bytes must be 4 or 8, got {self.precision_bytes}"
            )
        for ach, theo in (
            (self.peak_gflops_achievable, self.peak_gflops_theoretical),
            (self.peak_bw_achievable, self.peak_bw_theoretical),
        ):
            if ach is not None and theo is not None and ach > theo:
                raise ValidationError(
                    f"{self.name}: achievable rate {ach} exceeds theoretical {theo}"
                )

    @property
    def has_achievable_rates(self) -> bool:
        return (
            self.peak_gflops_achievable is not None
            and self.peak_bw_achievable is not None
        )


def ridge_point(machine: MachineSpec) -> float:
    """Minimum operational intensity (FLOPs/byte) to reach the compute roof."""
    if not machine.has_achievable_rates:
        raise AchievableRatesUnknownError(
            f"{machine.name}: achievable rates unknown, ridge point undefined"
        )
    return machine.peak_gflops_achievable / machine.peak_bw_achievable


def attainable_performance(machine: MachineSpec, oi: float) -> float:
    """Roofline bound min(oi * B_achievable, F_achievable), in GFLOPS."""
    if oi < 0:
        raise ValidationError(f"operational intensity must be >= 0, got {oi}")
    if not machine.has_achievable_rates:
        raise AchievableRatesUnknownError(
            f"{machine.name}: achievable rates unknown, roofline undefined"
        )
    return min(float(oi) * machine.peak_bw_achievable, machine.peak_gflops_achievable)


def classify_boundedness(machine: MachineSpec, oi: float) -> str:
    """'memory' below the ridge point, 'compute' at or above it."""
    return "memory" if float(oi) < ridge_point(machine) else "compute"


def _builtin_machines():
    xeon = MachineSpec(
        name="xeon-e5-2697v2-2s",
        arch=ArchParams(simd_lanes_sp=8, fma_ops_per_cycle=2, cores=12, sockets=2, clock_ghz=2.7),
        mem=MemParams(transfer_rate_mts=1866, channels=4, bytes_per_channel=8, sockets=2),
        peak_gflops_theoretical=1036.8,
        peak_bw_theoretical=119.424,
        peak_gflops_achievable=930.0,
        peak_bw_achievable=100.0,
        notes="dual-socket 12-core Ivy Bridge EP @ 2.7 GHz; "
        "measured rates give a ridge point of 9.3 FLOPs/byte",
    )
    phi = MachineSpec(
        name="phi-7120a",
        arch=ArchParams(simd_lanes_sp=16, fma_ops_per_cycle=2, cores=61, sockets=1, clock_ghz=1.238),
        mem=MemParams(transfer_rate_mts=5500, channels=16, bytes_per_channel=4, sockets=1),
        peak_gflops_theoretical=2416.576,
        peak_bw_theoretical=352.0,
        peak_gflops_achievable=2178.0,
        peak_bw_achievable=200.0,
        notes="61-core Knights Corner co-processor; "
        "measured rates give a ridge point of 10.89 FLOPs/byte",
    )
    gtx480 = MachineSpec(
        name="gtx480",
        arch=ArchParams(simd_lanes_sp=1, fma_ops_per_cycle=2, cores=480, sockets=1, clock_ghz=1.401),
        mem=MemParams(transfer_rate_mts=3696, channels=6, bytes_per_channel=8, sockets=1),
        peak_gflops_theoretical=1344.96,
        peak_bw_theoretical=177.408,
        peak_gflops_achievable=1280.95,
        peak_bw_achievable=150.7,
        notes="480-core Fermi GPU; achievable bandwidth 150.7 GB/s with an "
        "assumed ridge point of 8.5 FLOPs/byte (override to taste)",
    )
    return {m.name: m for m in (xeon, phi, gtx480)}


BUILTIN_MACHINES = _builtin_machines()

_MACHINE_KEYS = {
    "name",
    "peak_gflops_theoretical",
    "peak_bw_theoretical",
    "peak_gflops_achievable",
    "peak_bw_achievable",
    "precision_bytes",
    "notes",
    "arch",
    "mem",
}
_ARCH_KEYS = {"simd_lanes_sp", "fma_ops_per_cycle", "cores", "sockets", "clock_ghz"}
_MEM_KEYS = {"transfer_rate_mts", "channels", "bytes_per_channel", "sockets"}


def _parse_subkeys(doc, key, allowed, cls, path):
    sub = doc.get(key)
    if sub is None:
        return None
    if not isinstance(sub, dict):
        raise ValidationError(f"{path}: '{key}' must be a mapping of sub-keys")
    unknown = set(sub) - allowed
    if unknown:
        raise ValidationError(f"{path}: unknown {key} keys: {sorted(unknown)}")
    missing = allowed - set(sub)
    if missing:
        raise ValidationError(f"{path}: missing {key} keys: {sorted(missing)}")
    return cls(**sub)


def _machine_from_doc(doc, path):
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: machine document must be a mapping")
    unknown = set(doc) - _MACHINE_KEYS
    if unknown:
        raise ValidationError(f"{path}: unknown machine keys: {sorted(unknown)}")
    if "name" not in doc:
        raise ValidationError(f"{path}: machine document missing 'name'")
    arch = _parse_subkeys(doc, "arch", _ARCH_KEYS, ArchParams, path)
    mem = _parse_subkeys(doc, "mem", _MEM_KEYS, MemParams, path)
    notes = doc.get("notes", "")
    # With arch/mem given, theoretical peaks are computed, not read.
    theo_f = theoretical_peak_flops(arch) if arch else doc.get("peak_gflops_theoretical")
    theo_b = theoretical_peak_bandwidth(mem) if mem else doc.get("peak_bw_theoretical")
    ach_f = doc.get("peak_gflops_achievable")
    ach_b = doc.get("peak_bw_achievable")
    defaulted = []
    if ach_f is None and theo_f is not None:
        ach_f = ACHIEVABLE_FRACTION_HINT * theo_f
        defaulted.append("GFLOPS")
    if ach_b is None and theo_b is not None:
        ach_b = ACHIEVABLE_FRACTION_HINT * theo_b
        defaulted.append("bandwidth")
    if defaulted:
        hint = f"achievable {'/'.join(defaulted)} defaulted to 80% of theoretical"
        notes = f"{notes}; {hint}" if notes else hint
    return MachineSpec(
        name=str(doc["name"]),
        peak_gflops_achievable=ach_f,
        peak_bw_achievable=ach_b,
        peak_gflops_theoretical=theo_f,
        peak_bw_theoretical=theo_b,
        precision_bytes=doc.get("precision_bytes", 4),
        notes=notes,
        arch=arch,
        mem=mem,
    )


def _load_documents(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            docs = list(yaml.safe_load_all(fh))
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark is not None else "?"
        raise RegistryParseError(f"{path}: line {line}: {exc.problem}") from exc
    except yaml.YAMLError as exc:
        raise RegistryParseError(f"{path}: {exc}") from exc
    return [d for d in docs if d is not None]


def load_machines(path) -> list:
    """Parse one machine registry file (YAML, one document per machine).

    Duplicate names within a single file are an error; overriding an entry
    from another file (including the built-ins) is allowed and intended.
    """
    machines = []
    seen = set()
    for doc in _load_documents(path):
        m = _machine_from_doc(doc, path)
        if m.name in seen:
            raise RegistryConflictError(f"{path}: duplicate machine '{m.name}'")
        seen.add(m.name)
        machines.append(m)
    return machines


def machine_registry(files=()) -> dict:
    """Built-in machines plus user files, later files overriding by name."""
    registry = dict(BUILTIN_MACHINES)
    for path in files:
        for m in load_machines(path):
            registry[m.name] = m
    return registry


def get_machine(name: str, registry=None) -> MachineSpec:
    registry = BUILTIN_MACHINES if registry is None else registry
    try:
        return registry[name]
    except KeyError:
        known = ", ".join(sorted(registry))
        raise ValidationError(f"unknown machine '{name}' (known: {known})") from None
