"""Dyadic Haar shifts of complexity ``(m, n)`` and their commutators.

A shift is stored level by level.  For every active level ``k`` the arrays

* ``coeff[a, i, j]``  with shape ``(2^k, 2^m, 2^n)``,
* ``h[a, i, j, c]``   with shape ``(2^k, 2^m, 2^n, 2)``,
* ``kp[a, j, i, c]``  with shape ``(2^k, 2^n, 2^m, 2)``

describe the block of cube ``K = (k, a)``: ``I = (k+m, a 2^m + i)``,
``J = (k+n, a 2^n + j)``, ``h`` holds ``h_I^J`` on the two children of ``I``
and ``kp`` holds ``k_J^I`` on the two children of ``J``.  The block is

    A_K f = |K|^{-1} sum_{I,J} coeff[I,J] <f, h_I^J> k_J^I.

With ``|coeff| <= 1`` and sup-normalized profiles this gives the pointwise
bound ``|A_K f| <= chi_K <|f|>_K``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import Cube, DyadicGrid, GridFunction, depth_of

MATRIX_DEPTH_GUARD = 12


@dataclass(frozen=True)
class ShiftLevel:
    coeff: np.ndarray
    h: np.ndarray
    kp: np.ndarray


@dataclass(frozen=True, eq=False)
class HaarShift:
    grid: DyadicGrid
    m: int
    n: int
    levels: dict[int, ShiftLevel]
    cancellative: bool
    kind: str = "custom"
    meta: dict = field(default_factory=dict)

    @property
    def complexity(self) -> int:
        return max(self.m, self.n)

    def apply(self, f, restriction=None):
        return apply_shift(self, f, restriction)

    def matrix(self, guard: int = MATRIX_DEPTH_GUARD) -> np.ndarray:
        return shift_as_matrix(self, guard)

    def block_norms(self) -> dict[int, np.ndarray]:
        return {k: _block_norms(k, self.m, self.n, lv) for k, lv in self.levels.items()}


def _check_level(grid: DyadicGrid, k: int, m: int, n: int, lv: ShiftLevel) -> None:
    nk, nm, nn = 1 << k, 1 << m, 1 << n
    if lv.coeff.shape != (nk, nm, nn) or lv.h.shape != (nk, nm, nn, 2) or lv.kp.shape != (nk, nn, nm, 2):
        raise ValueError(f"level {k}: block arrays have the wrong shape")
    if k + max(m, n) > grid.depth:
        raise ValueError(f"level {k} with complexity ({m}, {n}) does not fit depth {grid.depth}")
    if np.any(np.abs(lv.coeff) > 1 + 1e-12) or np.any(np.abs(lv.h) > 1 + 1e-12) or np.any(np.abs(lv.kp) > 1 + 1e-12):
        raise ValueError(f"level {k}: coefficients and profiles must be bounded by 1")
    # profiles living on leaf cells must not split the leaf
    if k + m == grid.depth and not np.allclose(lv.h[..., 0], lv.h[..., 1]):
        raise ValueError(f"level {k}: input profiles on leaves must be constant")
    if k + n == grid.depth and not np.allclose(lv.kp[..., 0], lv.kp[..., 1]):
        raise ValueError(f"level {k}: output profiles on leaves must be constant")


def _child_integrals(values: np.ndarray, level: int, depth: int) -> np.ndarray:
    """Integrals of ``f`` over the two children of each level-``level`` cube."""
    batch = values.shape[1:]
    leaf = 2.0 ** -depth
    if level < depth:
        sums = values.reshape((1 << (level + 1), -1) + batch).sum(axis=1) * leaf
        return sums.reshape((1 << level, 2) + batch)
    half = values * (0.5 * leaf)
    return np.stack([half, half], axis=1)


def _spread(child_values: np.ndarray, level: int, depth: int) -> np.ndarray:
    """Leaf values of a function given on the children of level-``level`` cubes."""
    batch = child_values.shape[2:]
    if level < depth:
        flat = child_values.reshape((1 << (level + 1),) + batch)
        return np.repeat(flat, 1 << (depth - level - 1), axis=0)
    return child_values[:, 0]


def _restriction_masks(sha: HaarShift, restriction) -> dict[int, np.ndarray] | None:
    if restriction is None:
        return None
    if callable(restriction):
        return {k: np.array([bool(restriction((k, a))) for a in range(1 << k)]) for k in sha.levels}
    if isinstance(restriction, dict):
        return {k: np.asarray(restriction.get(k, np.zeros(1 << k)), dtype=bool) for k in sha.levels}
    chosen = {tuple(c) for c in restriction}
    masks = {k: np.zeros(1 << k, dtype=bool) for k in sha.levels}
    for k, a in chosen:
        if k in masks:
            masks[k][a] = True
    return masks


def apply_shift(sha: HaarShift, f, restriction=None):
    """``sum_{K admitted} A_K f``.

    ``restriction`` is ``None`` (all cubes), a predicate on cubes ``(k, j)``,
    an iterable of cubes, or a dict of per-level boolean masks.
    """
    values = f.values if isinstance(f, GridFunction) else np.asarray(f, dtype=float)
    depth = sha.grid.depth
    if values.shape[0] != sha.grid.n_leaves:
        raise ValueError("function does not live on the shift's grid")
    masks = _restriction_masks(sha, restriction)
    out = np.zeros_like(values, dtype=float)
    for k, lv in sha.levels.items():
        coeff = lv.coeff
        if masks is not None:
            if not masks[k].any():
                continue
            coeff = coeff * masks[k][:, None, None]
        lin, lout = k + sha.m, k + sha.n
        F = _child_integrals(values, lin, depth)
        F = F.reshape((1 << k, 1 << sha.m, 2) + values.shape[1:])
        pairing = np.einsum("kic...,kijc->kij...", F, lv.h)
        pairing = pairing * coeff.reshape(coeff.shape + (1,) * (values.ndim - 1))
        out_children = np.einsum("kij...,kjic->kjc...", pairing, lv.kp) * (1 << k)
        out_children = out_children.reshape((1 << lout, 2) + values.shape[1:])
        out += _spread(out_children, lout, depth)
    if out.ndim == 1:
        return GridFunction(out, sha.grid)
    return out


def shift_as_matrix(sha: HaarShift, guard: int = MATRIX_DEPTH_GUARD) -> np.ndarray:
    """Dense ``2^N x 2^N`` matrix with ``T @ f == apply_shift(sha, f)``."""
    if sha.grid.depth > guard:
        raise ValueError(f"depth {sha.grid.depth} exceeds the dense-matrix guard {guard}")
    return apply_shift(sha, np.eye(sha.grid.n_leaves))


def _block_matrix(k: int, m: int, n: int, lv: ShiftLevel) -> np.ndarray:
    """Per-cube matrices ``M[a, (j, c'), (i, c)]`` of the coefficient map."""
    mats = (1 << k) * np.einsum("aij,ajid,aijc->ajdic", lv.coeff, lv.kp, lv.h)
    return mats.reshape(1 << k, (1 << n) * 2, (1 << m) * 2)


def _block_norms(k: int, m: int, n: int, lv: ShiftLevel) -> np.ndarray:
    """Unweighted L2 operator norm of each block ``A_K`` at level ``k``."""
    mu = 2.0 ** -(k + m + 1)
    nu = 2.0 ** -(k + n + 1)
    sv = np.linalg.svd(_block_matrix(k, m, n, lv), compute_uv=False)
    return np.sqrt(mu * nu) * sv[:, 0]


def active_levels(depth: int, m: int, n: int, cancellative: bool) -> range:
    top = depth - max(m, n) - (1 if cancellative else 0)
    return range(0, top + 1)


def _haar_profiles(shape_h, shape_k):
    h = np.empty(shape_h)
    h[..., 0], h[..., 1] = 1.0, -1.0
    kp = np.empty(shape_k)
    kp[..., 0], kp[..., 1] = 1.0, -1.0
    return h, kp


def _petermichl_level(k: int) -> ShiftLevel:
    coeff = np.empty((1 << k, 1, 2))
    coeff[:, 0, 0], coeff[:, 0, 1] = 1.0, -1.0
    h, kp = _haar_profiles((1 << k, 1, 2, 2), (1 << k, 2, 1, 2))
    return ShiftLevel(coeff, h, kp)


def _multiplier_level(k: int, signs: np.ndarray) -> ShiftLevel:
    coeff = signs.reshape(1 << k, 1, 1).astype(float)
    h, kp = _haar_profiles((1 << k, 1, 1, 2), (1 << k, 1, 1, 2))
    return ShiftLevel(coeff, h, kp)


def _random_level(k: int, m: int, n: int, depth: int, cancellative: bool, rng) -> ShiftLevel:
    nk, nm, nn = 1 << k, 1 << m, 1 << n
    coeff = rng.uniform(-1.0, 1.0, size=(nk, nm, nn))
    if cancellative:
        a = rng.uniform(0.5, 1.0, size=(nk, nm, nn)) * rng.choice([-1.0, 1.0], size=(nk, nm, nn))
        b = rng.uniform(0.5, 1.0, size=(nk, nn, nm)) * rng.choice([-1.0, 1.0], size=(nk, nn, nm))
        h = np.stack([a, -a], axis=-1)
        kp = np.stack([b, -b], axis=-1)
    else:
        h = rng.uniform(-1.0, 1.0, size=(nk, nm, nn, 2))
        kp = rng.uniform(-1.0, 1.0, size=(nk, nn, nm, 2))
        if k + m == depth:
            h[..., 1] = h[..., 0]
        if k + n == depth:
            kp[..., 1] = kp[..., 0]
    return ShiftLevel(coeff, h, kp)


def build_shift(
    grid: DyadicGrid,
    m: int,
    n: int,
    kind: str = "petermichl",
    *,
    seed: int | None = None,
    signs=None,
    cancellative: bool = True,
    invariant: bool = False,
) -> HaarShift:
    """Construct a normalized shift.

    ``kind`` is ``"petermichl"`` (complexity (0, 1)), ``"haar_multiplier"``
    (complexity (0, 0), ``signs`` gives one coefficient per cube, default all
    +1) or ``"random"`` (seeded draw, levels drawn coarse to fine so the same
    seed gives the same coarse blocks at every depth).  With ``invariant``
    a random shift draws one block template and reuses it at every cube,
    times a seeded sign per cube; every block then has the same norm at any
    depth, as for the Petermichl shift.

    Normalization: a cancellative shift has orthogonal block domains and
    ranges, so each block is divided by ``max(1, ||A_K||)``.  A
    non-cancellative one is divided once by ``max(1, ||sum_K |A_K| ||)`` where
    ``|A_K|`` is the entrywise absolute matrix; that bounds every
    subcollection and needs a dense matrix (depth guard applies).
    """
    m, n = int(m), int(n)
    if m < 0 or n < 0:
        raise ValueError("shift parameters must be non-negative")
    depth = grid.depth
    if kind == "petermichl":
        if (m, n) != (0, 1):
            raise ValueError("the Petermichl shift has parameters (0, 1)")
        cancellative = True
    elif kind == "haar_multiplier":
        if (m, n) != (0, 0):
            raise ValueError("a Haar multiplier has parameters (0, 0)")
        cancellative = True
    elif kind != "random":
        raise ValueError(f"unknown shift kind {kind!r}")

    levels_range = active_levels(depth, m, n, cancellative)
    if len(levels_range) == 0:
        raise ValueError(f"complexity ({m}, {n}) does not fit in depth {depth}")

    levels: dict[int, ShiftLevel] = {}
    if kind == "petermichl":
        for k in levels_range:
            levels[k] = _petermichl_level(k)
    elif kind == "haar_multiplier":
        sign_list = None if signs is None else np.asarray(signs, dtype=float)
        offset = 0
        for k in levels_range:
            if sign_list is None:
                s = np.ones(1 << k)
            elif sign_list.ndim == 0:
                s = np.full(1 << k, float(sign_list))
            else:
                s = sign_list[offset:offset + (1 << k)]
                if s.size != 1 << k:
                    raise ValueError("not enough signs for every active cube")
                offset += 1 << k
            levels[k] = _multiplier_level(k, s)
    elif invariant:
        rng = np.random.default_rng(seed)
        template = _random_level(0, m, n, depth, cancellative, rng)
        for k in levels_range:
            sign = rng.choice([-1.0, 1.0], size=(1 << k, 1, 1))
            h = np.repeat(template.h, 1 << k, axis=0)
            kp = np.repeat(template.kp, 1 << k, axis=0)
            if not cancellative:
                if k + m == depth:
                    h[..., 1] = h[..., 0]
                if k + n == depth:
                    kp[..., 1] = kp[..., 0]
            levels[k] = ShiftLevel(np.repeat(template.coeff, 1 << k, axis=0) * sign, h, kp)
    else:
        rng = np.random.default_rng(seed)
        for k in levels_range:
            levels[k] = _random_level(k, m, n, depth, cancellative, rng)

    for k, lv in levels.items():
        _check_level(grid, k, m, n, lv)

    meta = {"seed": seed, "invariant": bool(invariant and kind == "random")}
    if kind == "random":
        if cancellative:
            for k, lv in list(levels.items()):
                scale = np.maximum(1.0, _block_norms(k, m, n, lv))
                levels[k] = ShiftLevel(lv.coeff / scale[:, None, None], lv.h, lv.kp)
        else:
            if depth > MATRIX_DEPTH_GUARD:
                raise ValueError("non-cancellative random shifts need depth <= 12 for normalization")
            raw = HaarShift(grid, m, n, levels, cancellative, kind)
            total = np.zeros((grid.n_leaves, grid.n_leaves))
            for k in levels:
                total += np.abs(apply_shift(raw, np.eye(grid.n_leaves), restriction={k: np.ones(1 << k)}))
            scale = max(1.0, float(np.linalg.norm(total, 2)))
            levels = {k: ShiftLevel(lv.coeff / scale, lv.h, lv.kp) for k, lv in levels.items()}
            meta["global_scale"] = scale
    return HaarShift(grid, m, n, levels, cancellative, kind, meta)


def zero_shift(grid: DyadicGrid) -> HaarShift:
    return HaarShift(grid, 0, 0, {}, True, "zero")


def load_shift_spec(source, grid: DyadicGrid) -> HaarShift:
    """Build a shift from ``{"m", "n", "kind", "seed", "cancellative", "invariant"}``."""
    if isinstance(source, (str, Path)) and Path(source).exists():
        source = Path(source).read_text()
    if isinstance(source, str):
        source = json.loads(source)
    kind = source.get("kind", "petermichl")
    defaults = {"petermichl": (0, 1), "haar_multiplier": (0, 0)}.get(kind, (0, 0))
    return build_shift(
        grid,
        int(source.get("m", defaults[0])),
        int(source.get("n", defaults[1])),
        kind,
        seed=source.get("seed"),
        signs=source.get("signs"),
        cancellative=bool(source.get("cancellative", True)),
        invariant=bool(source.get("invariant", False)),
    )


def block_leaf_matrix(sha: HaarShift, cube: Cube) -> np.ndarray:
    """Dense matrix of the single block ``A_K`` (for tests and diagnostics)."""
    return apply_shift(sha, np.eye(sha.grid.n_leaves), restriction=[cube])


# -- commutators --------------------------------------------------------------

def commutator_apply(b, T, f, order: int = 1):
    """``T_b^k f`` with ``T_b^1 = [b, T] = bT - Tb`` and ``T_b^k = [b, T_b^{k-1}]``.

    ``T`` is a ``HaarShift`` or any linear callable on leaf arrays.
    """
    if order < 1:
        raise ValueError("commutator order must be at least 1")
    bv = b.values if isinstance(b, GridFunction) else np.asarray(b, dtype=float)
    fv = f.values if isinstance(f, GridFunction) else np.asarray(f, dtype=float)
    apply = (lambda g: np.asarray(apply_shift(T, g))) if isinstance(T, HaarShift) else (lambda g: np.asarray(T(g)))
    bb = bv.reshape(bv.shape + (1,) * (fv.ndim - 1))

    def rec(g, k):
        if k == 0:
            return apply(g)
        return bb * rec(g, k - 1) - rec(bb * g, k - 1)

    out = rec(fv, order)
    return GridFunction(out) if out.ndim == 1 else out


def commutator_matrix(b, T, order: int = 1) -> np.ndarray:
    """Dense matrix of ``T_b^k`` from a shift or a dense matrix ``T``."""
    mat = shift_as_matrix(T) if isinstance(T, HaarShift) else np.asarray(T, dtype=float)
    bv = b.values if isinstance(b, GridFunction) else np.asarray(b, dtype=float)
    for _ in range(order):
        mat = bv[:, None] * mat - mat * bv[None, :]
    return mat
