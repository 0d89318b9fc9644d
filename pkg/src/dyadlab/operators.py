"""Dyadic maximal operators and stopping-time constructions.

Functions accept a :class:`GridFunction`, a :class:`Weight` or a plain array
whose first axis runs over the ``2**N`` leaves.  Trailing axes are a batch;
one-dimensional input comes back as a ``GridFunction``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import (
    Cube,
    DyadicGrid,
    GridFunction,
    Weight,
    as_weight,
    cube_means,
    depth_of,
    expand,
    running_max_down,
)


def _values(f) -> np.ndarray:
    if isinstance(f, (GridFunction, Weight)):
        return f.values
    return np.asarray(f, dtype=float)


def _wrap(values: np.ndarray, like):
    if values.ndim == 1:
        grid = getattr(like, "grid", None)
        return GridFunction(values, grid)
    return values


def dyadic_maximal(f):
    """``M_d f(x) = max_{Q containing x} <|f|>_Q``."""
    vals = _values(f)
    return _wrap(running_max_down(cube_means(np.abs(vals))), f)


def weighted_maximal(f, sigma):
    """Sup over containing cubes of ``sigma(Q)^{-1} int_Q |f| sigma``."""
    vals = _values(f)
    sig = _values(sigma)
    num = cube_means(np.abs(vals) * sig.reshape(sig.shape + (1,) * (vals.ndim - 1)))
    den = cube_means(sig)
    levels = [n / d.reshape(d.shape + (1,) * (vals.ndim - 1)) for n, d in zip(num, den)]
    return _wrap(running_max_down(levels), f)


def log_maximal(f):
    """Sup over containing cubes of the geometric mean of ``|f|``.

    A zero leaf makes every cube containing it contribute 0.
    """
    vals = np.abs(_values(f))
    with np.errstate(divide="ignore"):
        logs = np.log(vals)
    levels = [np.exp(m) for m in cube_means(logs)]
    return _wrap(running_max_down(levels), f)


def mr_maximal(w, r: float):
    """``M_r w = M_d(w^r)^{1/r}``."""
    if not r > 1:
        raise ValueError(f"r must exceed 1, got {r}")
    vals = _values(w)
    scale = np.max(np.abs(vals)) or 1.0
    out = running_max_down(cube_means(np.abs(vals / scale) ** r)) ** (1.0 / r) * scale
    return _wrap(out, w)


def local_maximal_integrals(w, power: float = 1.0, against=None) -> list[np.ndarray]:
    """``int_Q M_d(w chi_Q)^power * against`` for every cube ``Q``, per level.

    Inside ``Q`` the maximal function of ``w chi_Q`` only sees subcubes of
    ``Q`` (ancestors have smaller averages), so one fine-to-coarse sweep of a
    running max handles all cubes of a level at once.  Cost is O(N 2^N).
    """
    vals = _values(w)
    depth = depth_of(vals.shape[0])
    weight = np.ones_like(vals) if against is None else _values(against)
    means = cube_means(vals)
    running = means[depth].copy()
    out = [None] * (depth + 1)
    leaf = 2.0 ** -depth
    for k in range(depth, -1, -1):
        if k < depth:
            running = np.maximum(running, expand(means[k], depth))
        integrand = running ** power * weight if power != 1.0 or against is not None else running
        out[k] = integrand.reshape(1 << k, -1).sum(axis=1) * leaf
    return out


def llogl_integrals(w) -> list[np.ndarray]:
    """``int_Q w log(e + w / <w>_Q)`` for every cube, per level."""
    vals = _values(w)
    depth = depth_of(vals.size)
    means = cube_means(vals)
    leaf = 2.0 ** -depth
    out = []
    for k in range(depth + 1):
        ratio = vals / expand(means[k], depth)
        out.append((vals * np.log(np.e + ratio)).reshape(1 << k, -1).sum(axis=1) * leaf)
    return out


@dataclass(frozen=True)
class CZDecomposition:
    """Maximal dyadic cubes on which the average of ``f`` exceeds ``level``.

    ``root_exceeds`` flags the degenerate case where the whole interval
    already has average above the level; then ``cubes == [(0, 0)]``.
    """

    level: float
    cubes: list[Cube]
    averages: np.ndarray
    root_exceeds: bool
    grid: DyadicGrid

    def union_mask(self) -> np.ndarray:
        mask = np.zeros(self.grid.n_leaves, dtype=bool)
        for cube in self.cubes:
            mask[self.grid.leaves(cube)] = True
        return mask


def cz_decompose(f, lam: float) -> CZDecomposition:
    """Calderon-Zygmund cubes of a nonnegative function at height ``lam``."""
    if not lam > 0:
        raise ValueError(f"level must be positive, got {lam}")
    vals = _values(f)
    if vals.ndim != 1 or np.any(vals < 0):
        raise ValueError("cz_decompose expects a single nonnegative function")
    grid = DyadicGrid.for_values(vals)
    means = cube_means(vals)
    cubes: list[Cube] = []
    avgs: list[float] = []
    covered = np.zeros(1, dtype=bool)
    for k, level_means in enumerate(means):
        if k:
            covered = np.repeat(covered, 2)
        hit = (level_means > lam) & ~covered
        for j in np.flatnonzero(hit):
            cubes.append((k, int(j)))
            avgs.append(float(level_means[j]))
        covered |= hit
    return CZDecomposition(
        level=float(lam),
        cubes=cubes,
        averages=np.asarray(avgs),
        root_exceeds=bool(means[0][0] > lam),
        grid=grid,
    )


@dataclass(frozen=True)
class PrincipalCubes:
    """Principal (sigma-doubling) stopping cubes inside ``root``.

    ``cubes[i]`` has generation ``generation[i]``, principal parent
    ``parent[i]`` (-1 for generation 0) and sigma-average ``averages[i]``.
    ``owner[x]`` is the index of the smallest principal cube containing leaf
    ``x`` (-1 if none), so ``E(S_i) = {owner == i}``.
    """

    root: Cube
    cubes: list[Cube]
    generation: np.ndarray
    parent: np.ndarray
    averages: np.ndarray
    owner: np.ndarray
    grid: DyadicGrid

    @property
    def generations(self) -> list[list[Cube]]:
        n_gen = int(self.generation.max()) + 1 if self.cubes else 0
        return [[c for c, g in zip(self.cubes, self.generation) if g == i] for i in range(n_gen)]

    def e_set(self, index: int) -> np.ndarray:
        return self.owner == index

    def e_sizes(self) -> np.ndarray:
        """``|E(S)|`` for each principal cube."""
        counts = np.bincount(self.owner[self.owner >= 0], minlength=len(self.cubes))
        return counts * self.grid.leaf_size

    def sizes(self) -> np.ndarray:
        return np.array([self.grid.length(c) for c in self.cubes])

    def mass(self, w: Weight) -> np.ndarray:
        return np.array([w.of(c) for c in self.cubes])


CubeFilter = Callable[[int, int], bool]


def _filter_masks(grid: DyadicGrid, cube_filter) -> list[np.ndarray] | None:
    if cube_filter is None:
        return None
    if callable(cube_filter):
        return [np.array([bool(cube_filter(k, j)) for j in range(1 << k)]) for k in range(grid.depth + 1)]
    masks = [np.asarray(m, dtype=bool) for m in cube_filter]
    if len(masks) != grid.depth + 1 or any(m.size != 1 << k for k, m in enumerate(masks)):
        raise ValueError("cube filter masks must have one boolean per cube at every level")
    return masks


def principal_cubes(sigma, root: Cube = (0, 0), cube_filter=None) -> PrincipalCubes:
    """Stopping cubes where the sigma-average more than doubles.

    The children of ``S`` are the maximal cubes ``Q`` strictly inside ``S``
    (and admitted by ``cube_filter``) with ``<sigma>_Q > 2 <sigma>_S``.
    Without a filter generation 0 is ``{root}``; with one it is the maximal
    admitted cubes inside ``root``.  ``cube_filter`` is a predicate
    ``(k, j) -> bool`` or per-level boolean masks.
    """
    sigma = as_weight(sigma)
    grid = sigma.grid
    root = grid.check(root)
    masks = _filter_masks(grid, cube_filter)
    avgs = sigma.averages()
    depth = grid.depth

    cubes: list[Cube] = []
    gens: list[int] = []
    parents: list[int] = []
    cube_avgs: list[float] = []
    owner = np.full(grid.n_leaves, -1, dtype=np.int64)

    def maximal_below(top: Cube, strict: bool, threshold: float) -> list[Cube]:
        k0, j0 = top
        found: list[Cube] = []
        blocked = None
        for k in range(k0 + int(strict), depth + 1):
            span = 1 << (k - k0)
            blocked = np.zeros(span, dtype=bool) if blocked is None else np.repeat(blocked, 2)
            lo = j0 * span
            ok = avgs[k][lo:lo + span] > threshold
            if masks is not None:
                ok &= masks[k][lo:lo + span]
            ok &= ~blocked
            for j in np.flatnonzero(ok):
                found.append((k, lo + int(j)))
            blocked |= ok
        return found

    if masks is None:
        frontier = [(root, -1)]
    else:
        frontier = [(c, -1) for c in maximal_below(root, strict=False, threshold=-np.inf)]
    generation = 0
    while frontier:
        next_frontier = []
        for cube, parent in frontier:
            idx = len(cubes)
            cubes.append(cube)
            gens.append(generation)
            parents.append(parent)
            a = float(avgs[cube[0]][cube[1]])
            cube_avgs.append(a)
            owner[grid.leaves(cube)] = idx
            if cube[0] < depth:
                next_frontier.extend((c, idx) for c in maximal_below(cube, strict=True, threshold=2 * a))
        frontier = next_frontier
        generation += 1

    return PrincipalCubes(
        root=root,
        cubes=cubes,
        generation=np.asarray(gens, dtype=np.int64),
        parent=np.asarray(parents, dtype=np.int64),
        averages=np.asarray(cube_avgs),
        owner=owner,
        grid=grid,
    )


def a2_band_filter(w, a: int) -> list[np.ndarray]:
    """Masks of cubes with ``2^a < <w>_Q <w^{-1}>_Q <= 2^{a+1}``."""
    w = as_weight(w)
    inv = cube_means(1.0 / w.values)
    masks = []
    for k in range(w.depth + 1):
        prod = w.average(k) * inv[k]
        masks.append((prod > 2.0 ** a) & (prod <= 2.0 ** (a + 1)))
    return masks


def weak_quasinorm(g, w) -> float:
    """``sup_lambda lambda * w({|g| > lambda})``, exact on the finite model."""
    vals = np.abs(_values(g))
    wv = _values(w) * (2.0 ** -depth_of(vals.size))
    order = np.argsort(-vals, kind="stable")
    sorted_vals = vals[order]
    cum = np.cumsum(wv[order])
    # the super-level set {|g| >= v} ends at the last occurrence of v
    last = np.r_[sorted_vals[1:] != sorted_vals[:-1], True]
    return float(np.max(sorted_vals[last] * cum[last]))
