"""Invertible 2-D coordinate maps for backward warping.

Coordinates are ``(row, col)`` pairs.  Every map describes the forward
transform from source to target; warping only ever evaluates the inverse,
sending a target pixel ``(i, j)`` to a fractional source location ``(x, y)``.
Scale maps use pixel-center alignment, ``x = (i + 0.5) / S - 0.5``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

_SINGULAR_TOL = 1e-12


class SingularMapError(ValueError):
    """Raised when a map's linear part is not invertible."""


class PointAtInfinityError(ArithmeticError):
    """Raised when a target pixel maps to the line at infinity."""


@dataclass(frozen=True)
class FracCoord:
    """Fractional source coordinate with its integer and fractional parts."""

    x: float
    y: float

    @property
    def m(self):
        return math.floor(self.x)

    @property
    def n(self):
        return math.floor(self.y)

    @property
    def s(self):
        return self.x - self.m

    @property
    def t(self):
        return self.y - self.n


def round_half_away(v):
    return int(math.floor(abs(v) + 0.5)) * (1 if v >= 0 else -1)


def pixel_center_coords(n_out, scale):
    """Source coordinates of the ``n_out`` target samples along one axis."""
    i = np.arange(n_out, dtype=np.float64)
    return (i + 0.5) / scale - 0.5


class GeometricMap:
    """Base class; subclasses implement :meth:`inverse` and :meth:`forward`."""

    separable = False

    def inverse(self, i, j):
        """Vectorized ``H^-1``: return ``(x, y, valid)`` arrays."""
        raise NotImplementedError

    def forward(self, x, y):
        raise NotImplementedError

    def inverse_grid(self, target_h, target_w):
        i, j = np.meshgrid(
            np.arange(target_h, dtype=np.float64),
            np.arange(target_w, dtype=np.float64),
            indexing="ij",
        )
        return self.inverse(i, j)


@dataclass(frozen=True)
class ScaleMap(GeometricMap):
    """Axis-aligned scaling by ``s_row`` and ``s_col`` (both > 0)."""

    s_row: float
    s_col: float = None

    separable = True

    def __post_init__(self):
        if self.s_col is None:
            object.__setattr__(self, "s_col", self.s_row)
        for s in (self.s_row, self.s_col):
            if not (np.isfinite(s) and s > 0):
                raise ValueError(f"scale factors must be finite and > 0, got {s}")

    @classmethod
    def between(cls, source_shape, target_shape):
        """Scale map taking a ``source_shape`` lattice onto ``target_shape``."""
        return cls(target_shape[0] / source_shape[0], target_shape[1] / source_shape[1])

    def inverse(self, i, j):
        i = np.asarray(i, dtype=np.float64)
        j = np.asarray(j, dtype=np.float64)
        x = (i + 0.5) / self.s_row - 0.5
        y = (j + 0.5) / self.s_col - 0.5
        return x, y, np.ones(np.broadcast(x, y).shape, dtype=bool)

    def forward(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        return (x + 0.5) * self.s_row - 0.5, (y + 0.5) * self.s_col - 0.5

    def axis_coords(self, n_out, axis):
        return pixel_center_coords(n_out, self.s_row if axis == 0 else self.s_col)


@dataclass(frozen=True, eq=False)
class AffineMap(GeometricMap):
    """Forward affine map given as a 2x3 matrix acting on ``(row, col, 1)``."""

    matrix: np.ndarray
    _inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=np.float64).reshape(2, 3)
        det = np.linalg.det(a[:, :2])
        if abs(det) <= _SINGULAR_TOL:
            raise SingularMapError(f"affine linear part is singular (det = {det:.3e})")
        full = np.vstack([a, [0.0, 0.0, 1.0]])
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "_inv", np.linalg.inv(full))

    @property
    def det(self):
        return float(np.linalg.det(self.matrix[:, :2]))

    def inverse(self, i, j):
        i = np.asarray(i, dtype=np.float64)
        j = np.asarray(j, dtype=np.float64)
        h = self._inv
        x = h[0, 0] * i + h[0, 1] * j + h[0, 2]
        y = h[1, 0] * i + h[1, 1] * j + h[1, 2]
        return x, y, np.ones(x.shape, dtype=bool)

    def forward(self, x, y):
        a = self.matrix
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        return a[0, 0] * x + a[0, 1] * y + a[0, 2], a[1, 0] * x + a[1, 1] * y + a[1, 2]


@dataclass(frozen=True, eq=False)
class HomographyMap(GeometricMap):
    """Forward projective map given as a 3x3 matrix acting on ``(row, col, 1)``.

    The matrix is normalized so that its bottom-right entry is 1 whenever
    that entry is nonzero.
    """

    matrix: np.ndarray
    _inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        h = np.asarray(self.matrix, dtype=np.float64).reshape(3, 3)
        if abs(h[2, 2]) > _SINGULAR_TOL:
            h = h / h[2, 2]
        det = np.linalg.det(h)
        if abs(det) <= _SINGULAR_TOL:
            raise SingularMapError(f"homography is singular (det = {det:.3e})")
        object.__setattr__(self, "matrix", h)
        object.__setattr__(self, "_inv", np.linalg.inv(h))

    @property
    def det(self):
        return float(np.linalg.det(self.matrix))

    @staticmethod
    def _apply(h, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        w = h[2, 0] * x + h[2, 1] * y + h[2, 2]
        valid = np.abs(w) >= _SINGULAR_TOL
        safe = np.where(valid, w, 1.0)
        u = (h[0, 0] * x + h[0, 1] * y + h[0, 2]) / safe
        v = (h[1, 0] * x + h[1, 1] * y + h[1, 2]) / safe
        return u, v, valid

    def inverse(self, i, j):
        return self._apply(self._inv, i, j)

    def forward(self, x, y):
        u, v, _ = self._apply(self.matrix, x, y)
        return u, v


def inverse_map(geometric_map, i, j):
    """Map a single target pixel back to its fractional source coordinate.

    Raises
    ------
    PointAtInfinityError
        If the homogeneous coordinate of ``(i, j)`` vanishes.
    """
    x, y, valid = geometric_map.inverse(float(i), float(j))
    if not bool(valid):
        raise PointAtInfinityError(f"target pixel ({i}, {j}) maps to a point at infinity")
    return FracCoord(float(x), float(y))


def target_extent(geometric_map, source_h, source_w):
    """Target lattice size for a scale map: ``round(source * S)`` per axis."""
    if source_h < 1 or source_w < 1:
        raise ValueError("source dimensions must be >= 1")
    if not isinstance(geometric_map, ScaleMap):
        raise ValueError(
            f"{type(geometric_map).__name__} has no implied target size; "
            "pass explicit target dimensions to the warp call"
        )
    h = round_half_away(source_h * geometric_map.s_row)
    w = round_half_away(source_w * geometric_map.s_col)
    return max(h, 1), max(w, 1)


def parse_matrix(text, kind):
    """Parse 6 (affine) or 9 (homography) whitespace-separated numbers."""
    try:
        vals = [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise ValueError(f"could not parse {kind} parameters {text!r}") from None
    need = 6 if kind == "affine" else 9
    if len(vals) != need:
        raise ValueError(f"{kind} needs {need} numbers, got {len(vals)}")
    if kind == "affine":
        return AffineMap(np.array(vals).reshape(2, 3))
    return HomographyMap(np.array(vals).reshape(3, 3))
