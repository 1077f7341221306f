"""Axis-aligned boxes and uniform grid discretization.

A point is a plain tuple of floats. Boxes are closed: two boxes that only
touch along a face, edge or corner are considered intersecting.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

Vector = tuple[float, ...]
CellIndex = tuple[int, ...]


class DimensionError(ValueError):
    pass


def as_vector(values: Sequence[float] | float, dim: int | None = None) -> Vector:
    """Coerce a sequence (or a scalar broadcast to ``dim``) into a Vector."""
    if np.isscalar(values):
        if dim is None:
            raise DimensionError("scalar needs an explicit dimension")
        values = [values] * dim
    vec = tuple(float(v) for v in values)
    if not vec:
        raise DimensionError("vector must have at least one component")
    if dim is not None and len(vec) != dim:
        raise DimensionError(f"expected {dim} components, got {len(vec)}")
    if not all(math.isfinite(v) for v in vec):
        raise ValueError(f"vector components must be finite: {vec}")
    return vec


@dataclass(frozen=True)
class HyperInterval:
    """Closed box ``[lower_1, upper_1] x ... x [lower_n, upper_n]``."""

    lower: Vector
    upper: Vector

    def __post_init__(self):
        lo = as_vector(self.lower)
        hi = as_vector(self.upper)
        if len(lo) != len(hi):
            raise DimensionError(f"bounds differ in dimension: {len(lo)} vs {len(hi)}")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError(f"lower bound exceeds upper bound: {lo} > {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def center(self) -> Vector:
        return tuple(0.5 * (a + b) for a, b in zip(self.lower, self.upper))

    @property
    def extent(self) -> Vector:
        return tuple(b - a for a, b in zip(self.lower, self.upper))

    def contains_point(self, x: Sequence[float]) -> bool:
        _check_dim(len(x), self.dim)
        return all(a <= v <= b for a, v, b in zip(self.lower, x, self.upper))

    def contains_box(self, other: HyperInterval) -> bool:
        _check_dim(other.dim, self.dim)
        return all(
            a <= c and d <= b
            for a, b, c, d in zip(self.lower, self.upper, other.lower, other.upper)
        )

    def is_degenerate(self) -> bool:
        return any(a == b for a, b in zip(self.lower, self.upper))


def _check_dim(got: int, want: int) -> None:
    if got != want:
        raise DimensionError(f"dimension mismatch: {got} vs {want}")


def shift(c: Sequence[float], box: HyperInterval) -> HyperInterval:
    """Translate ``box`` by the vector ``c``."""
    _check_dim(len(c), box.dim)
    return HyperInterval(
        tuple(a + d for a, d in zip(box.lower, c)),
        tuple(b + d for b, d in zip(box.upper, c)),
    )


def ball(center: Sequence[float], r: Sequence[float] | float) -> HyperInterval:
    """Box of half-widths ``r`` centred on ``center`` (an infinity-norm ball)."""
    r = as_vector(r, len(center))
    if any(v <= 0 for v in r):
        raise ValueError(f"radius must be strictly positive: {tuple(r)}")
    return shift(center, HyperInterval(tuple(-v for v in r), tuple(r)))


def intersects(a: HyperInterval, b: HyperInterval) -> bool:
    _check_dim(a.dim, b.dim)
    return all(
        lo1 <= hi2 and lo2 <= hi1
        for lo1, hi1, lo2, hi2 in zip(a.lower, a.upper, b.lower, b.upper)
    )


def clamp_box(box: HyperInterval, domain: HyperInterval) -> HyperInterval:
    """Translate ``box`` so it lies inside ``domain``, flush against any wall it crossed.

    Boxes wider than the domain along an axis are cropped to the domain on that axis.
    """
    _check_dim(box.dim, domain.dim)
    lo, hi = [], []
    for a, b, dlo, dhi in zip(box.lower, box.upper, domain.lower, domain.upper):
        if b - a >= dhi - dlo:
            lo.append(dlo)
            hi.append(dhi)
            continue
        if a < dlo:
            a, b = dlo, dlo + (b - a)
        elif b > dhi:
            a, b = dhi - (b - a), dhi
        lo.append(a)
        hi.append(b)
    return HyperInterval(tuple(lo), tuple(hi))


@dataclass(frozen=True)
class GridSpec:
    """Uniform partition of ``domain`` into cells of half-width ``eta``.

    Cell ``k`` on axis ``a`` is centred at ``lower[a] + eta[a] * (2k + 1)``. When
    ``2 * eta`` does not divide the extent, the last cell overhangs the upper bound.
    """

    domain: HyperInterval
    eta: Vector

    def __post_init__(self):
        eta = as_vector(self.eta, self.domain.dim)
        if any(e <= 0 for e in eta):
            raise ValueError(f"eta must be strictly positive: {eta}")
        object.__setattr__(self, "eta", eta)

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def shape(self) -> tuple[int, ...]:
        # the small slack keeps 10 / 0.4 == 25.000000000000004 from adding a cell
        return tuple(
            max(1, math.ceil(ext / (2.0 * e) - 1e-9))
            for ext, e in zip(self.domain.extent, self.eta)
        )

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    def axis_reps(self, axis: int) -> np.ndarray:
        k = np.arange(self.shape[axis])
        return self.domain.lower[axis] + self.eta[axis] * (2 * k + 1)

    def rep(self, idx: CellIndex) -> Vector:
        self._check_index(idx)
        return tuple(
            lo + e * (2 * k + 1) for lo, e, k in zip(self.domain.lower, self.eta, idx)
        )

    def cell(self, idx: CellIndex) -> HyperInterval:
        return ball(self.rep(idx), self.eta)

    def indices(self) -> Iterator[CellIndex]:
        return itertools.product(*(range(n) for n in self.shape))

    def is_valid(self, idx: Sequence[int]) -> bool:
        return len(idx) == self.dim and all(0 <= k < n for k, n in zip(idx, self.shape))

    def _check_index(self, idx: Sequence[int]) -> None:
        if not self.is_valid(idx):
            raise IndexError(f"cell index {tuple(idx)} outside grid of shape {self.shape}")


def discretize(domain: HyperInterval, eta: Sequence[float] | float) -> GridSpec:
    return GridSpec(domain, as_vector(eta, domain.dim))


def cell_of_point(g: GridSpec, x: Sequence[float]) -> CellIndex:
    """Index of the cell containing ``x``; shared boundaries go to the lower index."""
    _check_dim(len(x), g.dim)
    if not g.domain.contains_point(x):
        raise ValueError(f"point {tuple(x)} outside domain {g.domain}")
    idx = []
    for v, lo, e, n in zip(x, g.domain.lower, g.eta, g.shape):
        k = min(max(math.ceil((v - lo) / (2.0 * e)) - 1, 0), n - 1)
        # settle rounding disagreements against the bounds ball(rep, eta) reports;
        # scanning upwards gives the lower index on shared boundaries
        for j in (k - 1, k, k + 1):
            if 0 <= j < n:
                rep = lo + e * (2 * j + 1)
                if rep + -e <= v <= rep + e:
                    k = j
                    break
        idx.append(k)
    return tuple(idx)


def moore_offsets(dim: int) -> list[tuple[int, ...]]:
    return [d for d in itertools.product((-1, 0, 1), repeat=dim) if any(d)]


def neighbors(g: GridSpec, c: CellIndex) -> set[CellIndex]:
    """Moore neighbourhood of ``c`` clipped to the grid.

    These are exactly the cells whose representative point lies within twice the
    half-width of ``rep(c)``; index offsets avoid comparing rounded coordinates.
    """
    g._check_index(c)
    out = set()
    for d in moore_offsets(g.dim):
        nb = tuple(k + s for k, s in zip(c, d))
        if g.is_valid(nb):
            out.add(nb)
    return out
