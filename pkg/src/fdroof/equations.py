"""Discretized wave-equation kernels: FLOPs per point, traffic and OI.

Each kernel is described by the number of derivative terms it evaluates per
stencil invocation plus fixed bookkeeping (extra multiplies/adds, shared
sub-expressions counted once via `duplicates`) and by the number of
field values moved to/from memory per grid point per time step.  The
operational intensity follows as FLOPs / bytes with an infinite-cache
traffic model: every field value crosses the memory bus exactly once.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import RegistryConflictError, ValidationError
from .machines import _load_documents
from .stencils import DerivativeKind, derivative_flops


@dataclass(frozen=True)
class EquationSpec:
    """Per-stencil-invocation cost description of one discretized kernel."""

    name: str
    factor: int = 1  # coupled-system multiplier (2 for the split p/r systems)
    n_first: int = 0
    n_second: int = 0
    n_cross: int = 0
    extra_mult: int = 0
    extra_add: int = 0
    duplicates: int = 0
    fields_moved: int = 1  # values loaded+stored per grid point per step
    fixed_kernel_flops: Optional[int] = None
    description: str = ""

    def __post_init__(self):
        if not self.name:
            raise ValidationError("equation name must be non-empty")
        if self.factor < 1:
            raise ValidationError(f"{self.name}: factor must be >= 1")
        for attr in ("n_first", "n_second", "n_cross", "extra_mult", "extra_add", "duplicates"):
            if getattr(self, attr) < 0:
                raise ValidationError(f"{self.name}: {attr} must be >= 0")
        if self.fields_moved < 1:
            raise ValidationError(f"{self.name}: fields_moved must be >= 1")
        if self.fixed_kernel_flops is not None and self.fixed_kernel_flops < 1:
            raise ValidationError(f"{self.name}: fixed_kernel_flops must be >= 1")
        if self.fixed_kernel_flops is None and kernel_flops(self, 3) <= 0:
            raise ValidationError(
                f"{self.name}: duplicates exceed counted operations "
                "(negative FLOPs per point)"
            )


def kernel_flops(eq: EquationSpec, k: int) -> int:
    """FLOPs to update one grid point with a k-point stencil per 1D line."""
    if eq.fixed_kernel_flops is not None:
        return eq.fixed_kernel_flops
    if k < 2:
        raise ValidationError(f"stencil size k must be >= 2, got {k}")
    axis = derivative_flops(DerivativeKind.SECOND_AXIS, k)
    cross = derivative_flops(DerivativeKind.SECOND_CROSS, k)
    per_invocation = (
        eq.n_first * derivative_flops(DerivativeKind.FIRST_AXIS, k)
        + eq.n_second * axis
        + eq.n_cross * cross
        + eq.extra_mult
        + eq.extra_add
        - eq.duplicates
    )
    return eq.factor * per_invocation


def bytes_per_point(eq: EquationSpec, precision_bytes: int = 4) -> int:
    """Memory traffic per grid point per time step."""
    if precision_bytes not in (4, 8):
        raise ValidationError(f"precision_bytes must be 4 or 8, got {precision_bytes}")
    return eq.fields_moved * precision_bytes


@dataclass(frozen=True)
class OIResult:
    """Operational intensity of one (equation, stencil size) pair.

    `oi` is an exact rational equal to kernel_flops / bytes_per_point.
    """

    equation: str
    k: int
    kernel_flops: int
    bytes_per_point: int
    oi: Fraction

    def __float__(self):
        return float(self.oi)


def operational_intensity(eq: EquationSpec, k: int, precision_bytes: int = 4) -> OIResult:
    flops = kernel_flops(eq, k)
    nbytes = bytes_per_point(eq, precision_bytes)
    return OIResult(eq.name, k, flops, nbytes, Fraction(flops, nbytes))


def traffic_model(loads: int, stores: int, streaming_stores: bool = False,
                  precision_bytes: int = 4) -> int:
    """Bytes per grid point from load/store counts.

    Without streaming stores each stored value costs a cache-line read plus
    the write (2s); streaming stores write straight to memory (s).
    """
    if loads < 0 or stores < 0:
        raise ValidationError("loads and stores must be >= 0")
    if loads + stores < 1:
        raise ValidationError("at least one load or store is required")
    if precision_bytes not in (4, 8):
        raise ValidationError(f"precision_bytes must be 4 or 8, got {precision_bytes}")
    store_cost = stores if streaming_stores else 2 * stores
    return precision_bytes * (loads + store_cost)


def _builtin_equations():
    acoustic = EquationSpec(
        name="acoustic",
        factor=1,
        n_second=3,
        extra_mult=3,
        extra_add=5,
        duplicates=4,
        fields_moved=4,  # squared slowness, two previous levels, new level
        description="scalar pressure wavefield u with squared slowness m and "
        "source q; star Laplacian, second order in time",
    )
    vti = EquationSpec(
        name="vti",
        factor=2,
        n_second=3,
        extra_mult=5,
        extra_add=5,
        duplicates=2,
        fields_moved=9,  # m, Thomsen eps/delta, two levels of p and r, new p and r
        description="vertically transverse isotropic split wavefields p, r with "
        "Thomsen parameters epsilon, delta",
    )
    tti = EquationSpec(
        name="tti",
        factor=2,
        n_second=3,
        n_cross=3,
        extra_mult=44,
        extra_add=17,
        duplicates=8,
        fields_moved=15,  # vti traffic + 6 precomputed cos/sin of tilt/azimuth
        description="tilted transverse isotropic split wavefields p, r on rotated "
        "axes; tilt/azimuth trigonometry precomputed and streamed as fields",
    )
    elastic_common = dict(
        factor=1,
        fixed_kernel_flops=441,  # 9 first derivatives, strain/stress products, sums
        description="3D anisotropic elastic displacement u_i with density rho, "
        "stress sigma_ij = c_ijkl eps_kl and source F; 8th-order star first "
        "derivatives, second order in time",
    )
    elastic_stiff = EquationSpec(
        name="elastic-stiff",
        fields_moved=71,  # 2x3 displacement levels + rho + 64 stiffness values
        **elastic_common,
    )
    elastic_symmetric = EquationSpec(
        name="elastic-symmetric",
        fields_moved=28,  # symmetric stiffness: 21 components instead of 64
        **elastic_common,
    )
    elastic_const = EquationSpec(
        name="elastic-const",
        fields_moved=7,  # constant stiffness kept on chip; only fields move
        **elastic_common,
    )
    return {
        e.name: e
        for e in (acoustic, vti, tti, elastic_stiff, elastic_symmetric, elastic_const)
    }


BUILTIN_EQUATIONS = _builtin_equations()

# Short alias used by the command line; the variable-stiffness entry is the
# realistic configuration.
EQUATION_ALIASES = {"elastic": "elastic-stiff"}

_EQUATION_KEYS = {
    "name",
    "factor",
    "n_first",
    "n_second",
    "n_cross",
    "extra_mult",
    "extra_add",
    "duplicates",
    "fields_moved",
    "fixed_kernel_flops",
    "description",
    "override",
}


def _equation_from_doc(doc, path):
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: equation document must be a mapping")
    unknown = set(doc) - _EQUATION_KEYS
    if unknown:
        raise ValidationError(f"{path}: unknown equation keys: {sorted(unknown)}")
    if "name" not in doc:
        raise ValidationError(f"{path}: equation document missing 'name'")
    fields = {k: v for k, v in doc.items() if k != "override"}
    return EquationSpec(**fields), bool(doc.get("override", False))


def load_equations(path) -> list:
    """Parse one equation definition file (YAML, one document per equation).

    Returns (spec, override_flag) pairs; shadowing a built-in requires the
    document to set `override: true`.
    """
    out = []
    seen = set()
    for doc in _load_documents(path):
        eq, override = _equation_from_doc(doc, path)
        if eq.name in seen:
            raise RegistryConflictError(f"{path}: duplicate equation '{eq.name}'")
        seen.add(eq.name)
        out.append((eq, override))
    return out


def equation_registry(files=()) -> dict:
    """Built-in equations plus user files; built-ins shadow only with override."""
    registry = dict(BUILTIN_EQUATIONS)
    for path in files:
        for eq, override in load_equations(path):
            if eq.name in BUILTIN_EQUATIONS and not override:
                raise RegistryConflictError(
                    f"{path}: '{eq.name}' is a built-in equation; "
                    "set 'override: true' to replace it"
                )
            registry[eq.name] = eq
    return registry


def get_equation(name: str, registry=None) -> EquationSpec:
    registry = BUILTIN_EQUATIONS if registry is None else registry
    resolved = EQUATION_ALIASES.get(name, name)
    try:
        return registry[resolved]
    except KeyError:
        known = ", ".join(sorted(registry))
        raise ValidationError(f"unknown equation '{name}' (known: {known})") from None
