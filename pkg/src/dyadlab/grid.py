"""Dyadic grid on [0, 1), piecewise-constant weights and test functions.

Everything lives on the finest cells of a depth-``N`` grid: a function is an
array of ``2**N`` leaf values, with the leaf axis first (extra trailing axes
are treated as a batch).  Cube ``(k, j)`` is ``[j 2^-k, (j+1) 2^-k)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

Cube = tuple[int, int]


@dataclass(frozen=True)
class DyadicGrid:
    depth: int

    def __post_init__(self):
        if not isinstance(self.depth, (int, np.integer)) or self.depth < 0:
            raise ValueError(f"depth must be a non-negative integer, got {self.depth!r}")

    @property
    def n_leaves(self) -> int:
        return 1 << self.depth

    @property
    def n_cubes(self) -> int:
        return (1 << (self.depth + 1)) - 1

    @property
    def leaf_size(self) -> float:
        return 2.0 ** -self.depth

    def cubes(self) -> Iterator[Cube]:
        """All cubes, coarse to fine."""
        for k in range(self.depth + 1):
            for j in range(1 << k):
                yield (k, j)

    def check(self, cube: Cube) -> Cube:
        k, j = cube
        if not (0 <= k <= self.depth and 0 <= j < (1 << k)):
            raise ValueError(f"cube {cube} is not in a depth-{self.depth} grid")
        return (int(k), int(j))

    @staticmethod
    def parent(cube: Cube) -> Cube:
        k, j = cube
        if k == 0:
            raise ValueError("the root has no parent")
        return (k - 1, j // 2)

    def children(self, cube: Cube) -> tuple[Cube, Cube]:
        k, j = self.check(cube)
        if k == self.depth:
            raise ValueError("leaf cells have no children in the grid")
        return (k + 1, 2 * j), (k + 1, 2 * j + 1)

    def leaves(self, cube: Cube) -> slice:
        k, j = self.check(cube)
        span = 1 << (self.depth - k)
        return slice(j * span, (j + 1) * span)

    @staticmethod
    def length(cube: Cube) -> float:
        return 2.0 ** -cube[0]

    @staticmethod
    def interval(cube: Cube) -> tuple[float, float]:
        k, j = cube
        return j * 2.0 ** -k, (j + 1) * 2.0 ** -k

    @staticmethod
    def contains(outer: Cube, inner: Cube) -> bool:
        (k1, j1), (k2, j2) = outer, inner
        return k2 >= k1 and (j2 >> (k2 - k1)) == j1

    def indicator(self, cube: Cube) -> np.ndarray:
        out = np.zeros(self.n_leaves)
        out[self.leaves(cube)] = 1.0
        return out

    @classmethod
    def for_values(cls, values) -> "DyadicGrid":
        return cls(depth_of(np.shape(values)[0]))


def depth_of(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(f"number of leaves must be a power of two, got {n}")
    return n.bit_length() - 1


# -- level-wise aggregates ----------------------------------------------------

def cube_means(values) -> list[np.ndarray]:
    """Averages over every cube, one array of shape ``(2**k, ...)`` per level.

    Built bottom-up by pairwise averaging, so a batch axis rides along.
    """
    values = np.asarray(values, dtype=float)
    depth = depth_of(values.shape[0])
    means = [None] * (depth + 1)
    means[depth] = values
    for k in range(depth - 1, -1, -1):
        finer = means[k + 1]
        means[k] = 0.5 * (finer[0::2] + finer[1::2])
    return means


def expand(level_values: np.ndarray, depth: int) -> np.ndarray:
    """Broadcast per-cube values at one level back to the leaves."""
    reps = (1 << depth) // level_values.shape[0]
    return np.repeat(level_values, reps, axis=0)


def running_max_down(level_values: Sequence[np.ndarray]) -> np.ndarray:
    """Pointwise max over all cubes containing each leaf, coarse to fine.

    ``level_values[k]`` holds one value per level-``k`` cube.  Cost is O(2^N).
    """
    current = level_values[0]
    for finer in level_values[1:]:
        current = np.maximum(np.repeat(current, 2, axis=0), finer)
    return current


# -- functions and weights ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real function constant on finest cells."""

    values: np.ndarray
    grid: DyadicGrid = None

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1:
            raise ValueError("GridFunction values must be one-dimensional")
        if not np.all(np.isfinite(vals)):
            raise ValueError("GridFunction values must be finite")
        grid = self.grid or DyadicGrid.for_values(vals)
        if grid.n_leaves != vals.size:
            raise ValueError("values do not match the grid size")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "grid", grid)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self):
        return self.values.size

    def _wrap(self, vals):
        return GridFunction(vals, self.grid)

    def _other(self, other):
        return other.values if isinstance(other, (GridFunction, Weight)) else other

    def __add__(self, other):
        return self._wrap(self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.values - self._other(other))

    def __rsub__(self, other):
        return self._wrap(self._other(other) - self.values)

    def __mul__(self, other):
        return self._wrap(self.values * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.values)

    def __abs__(self):
        return self._wrap(np.abs(self.values))

    def pair(self, other) -> float:
        """``<f, g> = sum f g |leaf|``."""
        return float(np.dot(self.values, np.asarray(other, dtype=float)) * self.grid.leaf_size)

    def integral(self) -> float:
        return float(self.values.sum() * self.grid.leaf_size)


class Weight:
    """Strictly positive piecewise-constant weight with per-cube masses.

    ``mass[k][j]`` is ``w(Q)`` for cube ``(k, j)``; ``log_mean[k][j]`` is the
    average of ``log w`` over it.  Both are filled bottom-up at construction
    and the object is read-only afterwards.
    """

    def __init__(self, values, grid: DyadicGrid | None = None):
        vals = np.array(values, dtype=float)
        if vals.ndim != 1:
            raise ValueError("weight values must be one-dimensional")
        if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
            bad = np.flatnonzero(~np.isfinite(vals) | (vals <= 0))[:5]
            raise ValueError(f"weight must be strictly positive and finite; bad leaves {bad.tolist()}")
        grid = grid or DyadicGrid.for_values(vals)
        if grid.n_leaves != vals.size:
            raise ValueError("values do not match the grid size")
        vals.setflags(write=False)
        self.values = vals
        self.grid = grid
        self.mass = _freeze(_bottom_up_sums(vals * grid.leaf_size))
        self.log_mean = _freeze(cube_means(np.log(vals)))

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return f"Weight(depth={self.grid.depth}, min={self.values.min():.4g}, max={self.values.max():.4g})"

    @property
    def depth(self) -> int:
        return self.grid.depth

    def average(self, level: int) -> np.ndarray:
        return self.mass[level] * (1 << level)

    def averages(self) -> list[np.ndarray]:
        return [self.average(k) for k in range(self.depth + 1)]

    def of(self, cube: Cube) -> float:
        k, j = self.grid.check(cube)
        return float(self.mass[k][j])

    def measure(self, mask) -> float:
        """``w(E)`` for a leaf mask (bool array) or batch of masks."""
        return np.tensordot(np.asarray(mask, dtype=float).T, self.values, axes=1) * self.grid.leaf_size

    def power(self, exponent: float) -> "Weight":
        return Weight(self.values ** exponent, self.grid)


def _bottom_up_sums(leaf_masses: np.ndarray) -> list[np.ndarray]:
    depth = depth_of(leaf_masses.shape[0])
    sums = [None] * (depth + 1)
    sums[depth] = leaf_masses
    for k in range(depth - 1, -1, -1):
        finer = sums[k + 1]
        sums[k] = finer[0::2] + finer[1::2]
    return sums


def _freeze(arrays):
    for a in arrays:
        a.setflags(write=False)
    return tuple(arrays)


def as_weight(w) -> Weight:
    return w if isinstance(w, Weight) else Weight(w)


def dual_weight(w, p: float) -> Weight:
    """``sigma = w^{-1/(p-1)}`` applied leafwise."""
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    w = as_weight(w)
    return Weight(w.values ** (-1.0 / (p - 1.0)), w.grid)


def conjugate(p: float) -> float:
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    return p / (p - 1.0)


# -- closed-form families -----------------------------------------------------

@dataclass(frozen=True)
class WeightFamilySpec:
    """Recipe for a weight.

    ``variant`` is ``"raw"`` (``values``), ``"two_valued"`` (``t`` on the leaf
    set ``E`` and 1 elsewhere; ``E`` is ``"left_half"`` or a list of leaf
    indices) or ``"power"`` (``x**alpha`` with exact cell averages).
    """

    variant: str
    values: tuple | None = None
    t: float | None = None
    E: object = "left_half"
    alpha: float | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @classmethod
    def raw(cls, values):
        return cls("raw", values=tuple(float(v) for v in values))

    @classmethod
    def two_valued(cls, t, E="left_half"):
        if not isinstance(E, str):
            E = tuple(int(i) for i in E)
        return cls("two_valued", t=float(t), E=E)

    @classmethod
    def power(cls, alpha):
        return cls("power", alpha=float(alpha))

    def validate(self, grid: DyadicGrid | None = None) -> None:
        if self.variant == "raw":
            if not self.values:
                raise ValueError("raw weight needs values")
        elif self.variant == "two_valued":
            if self.t is None or not self.t > 0:
                raise ValueError(f"two_valued weight needs t > 0, got {self.t}")
            if grid is not None:
                idx = leaf_set(self.E, grid)
                if idx.size == 0 or idx.size == grid.n_leaves:
                    raise ValueError("two_valued weight needs a nonempty proper leaf set E")
        elif self.variant == "power":
            if self.alpha is None or not self.alpha > -1:
                raise ValueError(f"power weight needs alpha > -1, got {self.alpha}")
        else:
            raise ValueError(f"unknown weight family {self.variant!r}")

    def to_dict(self) -> dict:
        if self.variant == "raw":
            return {"family": "raw", "values": list(self.values)}
        if self.variant == "two_valued":
            E = self.E if isinstance(self.E, str) else list(self.E)
            return {"family": "two_valued", "t": self.t, "E": E}
        return {"family": "power", "alpha": self.alpha}

    @classmethod
    def from_dict(cls, d: dict) -> "WeightFamilySpec":
        family = d.get("family")
        if family == "raw":
            return cls.raw(d["values"])
        if family == "two_valued":
            return cls.two_valued(d["t"], d.get("E", "left_half"))
        if family == "power":
            return cls.power(d["alpha"])
        raise ValueError(f"unknown weight family {family!r}")


def leaf_set(E, grid: DyadicGrid) -> np.ndarray:
    if isinstance(E, str):
        if E == "left_half":
            if grid.depth == 0:
                raise ValueError("left_half needs depth >= 1")
            return np.arange(grid.n_leaves // 2)
        raise ValueError(f"unknown leaf set {E!r}")
    idx = np.unique(np.asarray(E, dtype=int))
    if idx.size and (idx[0] < 0 or idx[-1] >= grid.n_leaves):
        raise ValueError("leaf index out of range")
    return idx


def power_cell_averages(alpha: float, grid: DyadicGrid) -> np.ndarray:
    """Exact averages of ``x**alpha`` over the finest cells."""
    edges = np.arange(grid.n_leaves + 1) * grid.leaf_size
    a, b = edges[:-1], edges[1:]
    return (b ** (alpha + 1) - a ** (alpha + 1)) / ((alpha + 1) * (b - a))


def materialize(spec: WeightFamilySpec, grid: DyadicGrid) -> Weight:
    spec.validate(grid)
    if spec.variant == "raw":
        vals = np.asarray(spec.values, dtype=float)
        if vals.size != grid.n_leaves:
            raise ValueError(f"raw weight has {vals.size} values, grid has {grid.n_leaves} leaves")
        return Weight(vals, grid)
    if spec.variant == "two_valued":
        vals = np.ones(grid.n_leaves)
        vals[leaf_set(spec.E, grid)] = spec.t
        return Weight(vals, grid)
    return Weight(power_cell_averages(spec.alpha, grid), grid)


def load_weight_spec(source) -> tuple[WeightFamilySpec, DyadicGrid]:
    """Parse ``{"depth": N, "weight": {"family": ..., ...}}`` from a dict, str or path."""
    if isinstance(source, (str, Path)) and Path(source).exists():
        source = Path(source).read_text()
    if isinstance(source, str):
        source = json.loads(source)
    try:
        grid = DyadicGrid(int(source["depth"]))
        spec = WeightFamilySpec.from_dict(source["weight"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed weight spec: {exc}") from exc
    spec.validate(grid)
    return spec, grid


# -- random test weights ------------------------------------------------------

def random_weight(grid: DyadicGrid, rng: np.random.Generator, kind: str | None = None) -> Weight:
    """Random positive weight for property checks.

    ``cascade`` multiplies dyadic children by random factors (finite A_2 with
    multiscale structure), ``lognormal`` is i.i.d., ``sparse`` puts a few
    large bumps on a flat background.  ``None`` picks one at random.
    """
    kinds = ("cascade", "lognormal", "sparse")
    if kind is None:
        kind = kinds[rng.integers(len(kinds))]
    n = grid.n_leaves
    if kind == "cascade":
        spread = rng.uniform(0.1, 0.9)
        vals = np.ones(1)
        for _ in range(grid.depth):
            split = rng.uniform(-spread, spread, size=vals.size)
            vals = np.stack([vals * (1 + split), vals * (1 - split)], axis=1).ravel()
        vals = vals * rng.lognormal(0.0, 0.1, size=n)
    elif kind == "lognormal":
        vals = rng.lognormal(0.0, rng.uniform(0.2, 2.0), size=n)
    elif kind == "sparse":
        vals = np.ones(n)
        hits = rng.integers(n, size=rng.integers(1, 6))
        vals[hits] += rng.lognormal(2.0, 1.5, size=hits.size)
    else:
        raise ValueError(f"unknown random weight kind {kind!r}")
    return Weight(vals, grid)
