"""Central finite-difference weights, stencil geometries and FLOP costs.

Weights are generated with the Fornberg recursion carried out in exact
rational arithmetic, so weight sums (and everything derived from them,
such as the CFL weight sum a2) are free of accumulation error.  Floats
appear only at the API boundary.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .errors import ValidationError

MIN_ACCURACY = 2
MAX_ACCURACY = 32


class DerivativeKind(Enum):
    """Derivative terms that occur in the supported wave-equation kernels."""

    FIRST_AXIS = "first-axis"
    SECOND_AXIS = "second-axis"
    SECOND_CROSS = "second-cross"


@dataclass(frozen=True)
class FDWeights:
    """1D central difference weights for d^m/dx^m at the stated accuracy.

    ``weights[i]`` multiplies the sample at offset ``i - radius``; the
    weighted sum approximates the derivative at the centre when scaled by
    ``h ** grid_exponent``.
    """

    derivative_order: int
    accuracy_order: int
    weights: tuple

    @property
    def grid_exponent(self) -> int:
        return -self.derivative_order

    @property
    def radius(self) -> int:
        return self.accuracy_order // 2

    @property
    def offsets(self):
        r = self.radius
        return tuple(range(-r, r + 1))

    def abs_sum(self) -> Fraction:
        return sum((abs(w) for w in self.weights), Fraction(0))

    def as_floats(self):
        return tuple(float(w) for w in self.weights)


def _validate_orders(m, accuracy):
    if m not in (1, 2):
        raise ValidationError(f"derivative order must be 1 or 2, got {m}")
    if accuracy % 2 != 0 or not MIN_ACCURACY <= accuracy <= MAX_ACCURACY:
        raise ValidationError(
            f"accuracy order must be even and within "
            f"[{MIN_ACCURACY}, {MAX_ACCURACY}], got {accuracy}"
        )


@lru_cache(maxsize=None)
def _fornberg(m: int, accuracy: int):
    """Fornberg weight recursion on the centred grid -r..r, exact rationals.

    Returns the weight row for the m-th derivative using all accuracy+1
    points.
    """
    r = accuracy // 2
    grid = [Fraction(o) for o in range(-r, r + 1)]
    npts = len(grid)
    # delta[j][mu] = weight of grid[j] for the mu-th derivative,
    # built up one grid point at a time.
    delta = [[Fraction(0)] * (m + 1) for _ in range(npts)]
    delta[0][0] = Fraction(1)
    c1 = Fraction(1)
    for n in range(1, npts):
        c2 = Fraction(1)
        prev = [row[:] for row in delta]
        for j in range(n):
            c3 = grid[n] - grid[j]
            c2 *= c3
            for mu in range(min(n, m) + 1):
                lower = prev[j][mu - 1] if mu > 0 else Fraction(0)
                delta[j][mu] = (grid[n] * prev[j][mu] - mu * lower) / c3
        for mu in range(min(n, m) + 1):
            lower = prev[n - 1][mu - 1] if mu > 0 else Fraction(0)
            delta[n][mu] = c1 / c2 * (mu * lower - grid[n - 1] * prev[n - 1][mu])
        c1 = c2
    return tuple(row[m] for row in delta)


def fd_weights(m: int, accuracy: int) -> FDWeights:
    """Exact central difference weights of the given derivative/accuracy order."""
    _validate_orders(m, accuracy)
    return FDWeights(m, accuracy, _fornberg(m, accuracy))


def a2_sum(accuracy: int, dims: int = 3) -> float:
    """Sum of absolute Laplacian weights: dims x sum|w| of the 1D second
    derivative.  This is the a2 entering the CFL bound dt <= h*sqrt(a1/a2)/v."""
    if dims < 1:
        raise ValidationError(f"dims must be >= 1, got {dims}")
    return float(dims * fd_weights(2, accuracy).abs_sum())


def derivative_flops(kind: DerivativeKind, k: int) -> int:
    """FLOPs charged for one derivative evaluated on a k-point line.

    Axis derivatives cost (k+1) mult + (k-1) add = 2k; cross derivatives
    cost (k^2-2k) mult + (k^2-2k-1) add = 2k^2 - 4k - 1.
    """
    if k < 2:
        raise ValidationError(f"stencil size k must be >= 2, got {k}")
    if kind in (DerivativeKind.FIRST_AXIS, DerivativeKind.SECOND_AXIS):
        return 2 * k
    if kind is DerivativeKind.SECOND_CROSS:
        return 2 * k * k - 4 * k - 1
    raise ValidationError(f"unknown derivative kind: {kind!r}")


@dataclass(frozen=True)
class StencilGeometry:
    """Explicit 3D stencil support: (dx, dy, dz, weight) per point.

    ``star`` holds the axis-aligned Laplacian points; ``rotated`` adds the
    cross-derivative points in the xy, yz and xz planes.  Weights on the
    cross points come from tensor products of the 1D first-derivative
    weights and are meant for display and oracle checks, not FLOP counting.
    """

    kind: str
    k: int
    points: tuple

    @property
    def npoints(self) -> int:
        return len(self.points)

    def point_list(self) -> str:
        """Plain-text export: one `dx dy dz weight` line per point."""
        lines = [
            f"{dx} {dy} {dz} {float(w)!r}" for dx, dy, dz, w in self.points
        ]
        return "\n".join(lines) + "\n"

    def write_points(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.point_list())


def stencil_geometry(kind: str, k: int) -> StencilGeometry:
    """Enumerate the 3D stencil of size k per 1D line.

    star    -> 3(k-1)+1 points (axis offsets within radius (k-1)/2 + centre)
    rotated -> star plus (k-1)^2 cross points in each of the three planes
    """
    if kind not in ("star", "rotated"):
        raise ValidationError(f"stencil kind must be 'star' or 'rotated', got {kind!r}")
    if k < 3 or k % 2 == 0:
        raise ValidationError(f"symmetric stencils need odd k >= 3, got {k}")
    r = (k - 1) // 2
    w2 = fd_weights(2, k - 1).weights
    points = [(0, 0, 0, 3 * w2[r])]  # centre accumulates all three axes
    for j in range(1, r + 1):
        for sign in (1, -1):
            off = sign * j
            points.append((off, 0, 0, w2[r + j]))
            points.append((0, off, 0, w2[r + j]))
            points.append((0, 0, off, w2[r + j]))
    if kind == "rotated":
        w1 = fd_weights(1, k - 1).weights
        planes = ((0, 1), (1, 2), (0, 2))  # xy, yz, xz
        for ai, aj in planes:
            for i in range(-r, r + 1):
                if i == 0:
                    continue
                for j in range(-r, r + 1):
                    if j == 0:
                        continue
                    off = [0, 0, 0]
                    off[ai] = i
                    off[aj] = j
                    points.append((off[0], off[1], off[2], w1[r + i] * w1[r + j]))
    return StencilGeometry(kind, k, tuple(points))
