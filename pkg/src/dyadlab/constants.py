"""Weight functionals and weighted operator norms on the dyadic model.

Every supremum is an exact maximum over all ``2^{N+1} - 1`` cubes, computed
level by level from per-cube aggregates.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.sparse.linalg import svds

from .grid import (
    Cube,
    GridFunction,
    Weight,
    as_weight,
    conjugate,
    cube_means,
    depth_of,
    dual_weight,
)
from .operators import dyadic_maximal, llogl_integrals, local_maximal_integrals
from .shifts import MATRIX_DEPTH_GUARD, HaarShift, apply_shift, shift_as_matrix

RHI_TAU = 2 ** 12


def _argmax_cube(per_level: list[np.ndarray]) -> tuple[float, Cube]:
    best, where = -np.inf, (0, 0)
    for k, vals in enumerate(per_level):
        j = int(np.argmax(vals))
        if vals[j] > best:
            best, where = float(vals[j]), (k, j)
    return best, where


def _level_max(per_level) -> float:
    return float(max(np.max(v) for v in per_level))


def ap_constant(w, p: float) -> float:
    """``[w]_{A_p} = max_Q <w>_Q <w^{-1/(p-1)}>_Q^{p-1}``."""
    w = as_weight(w)
    sigma = dual_weight(w, p)
    return _level_max([w.average(k) * sigma.average(k) ** (p - 1) for k in range(w.depth + 1)])


def ainfty_hruscev(w) -> float:
    """``max_Q <w>_Q exp(-<log w>_Q)``."""
    w = as_weight(w)
    return _level_max([w.average(k) * np.exp(-w.log_mean[k]) for k in range(w.depth + 1)])


def wilson_ratios(w) -> list[np.ndarray]:
    """``w(Q)^{-1} int_Q M_d(w chi_Q)`` for every cube, per level."""
    w = as_weight(w)
    integrals = local_maximal_integrals(w.values)
    return [integrals[k] / w.mass[k] for k in range(w.depth + 1)]


def ainfty_wilson(w) -> float:
    """``[w]'_{A_inf} = max_Q w(Q)^{-1} int_Q M_d(w chi_Q)``."""
    return _level_max(wilson_ratios(w))


class TwoWeightPair(NamedTuple):
    b_p: float
    a_p: float


def two_weight_bp(w, sigma, p: float) -> TwoWeightPair:
    """``B_p[w, sigma]`` and ``A_p[w, sigma]`` in one pass."""
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    w, sigma = as_weight(w), as_weight(sigma)
    b_levels, a_levels = [], []
    for k in range(w.depth + 1):
        wa, sa = w.average(k), sigma.average(k)
        a_levels.append(wa * sa ** (p - 1))
        b_levels.append(wa * sa ** p * np.exp(-sigma.log_mean[k]))
    return TwoWeightPair(_level_max(b_levels), _level_max(a_levels))


def rhi_exponent(w, tau: float = RHI_TAU) -> float:
    """``r(w) = 1 + 1 / (tau [w]'_{A_inf})``."""
    return 1.0 + 1.0 / (tau * ainfty_wilson(w))


class RHIResult(NamedTuple):
    holds: bool
    worst_ratio: float
    worst_cube: Cube


def rhi_ratios(w, r: float) -> list[np.ndarray]:
    """``<w^r>_Q^{1/r} / <w>_Q`` per level (scale invariant, so ``w`` is normalized first)."""
    if not r > 1:
        raise ValueError(f"r must exceed 1, got {r}")
    w = as_weight(w)
    vals = w.values / w.values.max()
    num = cube_means(vals ** r)
    den = cube_means(vals)
    return [n ** (1.0 / r) / d for n, d in zip(num, den)]


def rhi_verify(w, r: float, bound: float = 2.0) -> RHIResult:
    worst, cube = _argmax_cube(rhi_ratios(w, r))
    return RHIResult(worst <= bound, worst, cube)


def rhi_inverse_bound(K: float, r: float) -> float:
    """Constant-free core ``K r'`` of the converse reverse Holder estimate."""
    if K < 1 or not r > 1:
        raise ValueError("need K >= 1 and r > 1")
    return K * r / (r - 1.0)


def rhi_constant(w, r: float) -> float:
    """Smallest ``K`` with ``<w^r>_Q^{1/r} <= K <w>_Q`` on every cube."""
    return _level_max(rhi_ratios(w, r))


def _weighted_median_cost(vals: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Row-wise ``min_c sum |v - c| w / sum w`` for 2-D arrays."""
    order = np.argsort(vals, axis=1, kind="stable")
    v = np.take_along_axis(vals, order, axis=1)
    wt = np.take_along_axis(weights, order, axis=1)
    cum = np.cumsum(wt, axis=1)
    total = cum[:, -1:]
    idx = np.argmax(cum >= 0.5 * total, axis=1)
    med = v[np.arange(v.shape[0]), idx][:, None]
    return (np.abs(v - med) * wt).sum(axis=1) / total[:, 0]


def bmo_levels(f, w=None) -> list[np.ndarray]:
    """Per-cube ``inf_c w(Q)^{-1} int_Q |f - c| w``, per level."""
    vals = f.values if isinstance(f, GridFunction) else np.asarray(f, dtype=float)
    depth = depth_of(vals.size)
    wv = np.ones_like(vals) if w is None else np.asarray(as_weight(w).values)
    return [_weighted_median_cost(vals.reshape(1 << k, -1), wv.reshape(1 << k, -1)) for k in range(depth + 1)]


def bmo_norm(f, w=None) -> float:
    """``||f||_{BMO(w)}``; the inner infimum sits at a weighted median."""
    return _level_max(bmo_levels(f, w))


def a1_constant(w) -> float:
    """``max_Q <w>_Q / min_Q w``."""
    w = as_weight(w)
    return _level_max([w.average(k) / w.values.reshape(1 << k, -1).min(axis=1) for k in range(w.depth + 1)])


def llogl_ratios(w) -> list[np.ndarray]:
    """``int_Q w log(e + w/<w>_Q) / int_Q M_d(w chi_Q)`` per level."""
    w = as_weight(w)
    num = llogl_integrals(w.values)
    den = local_maximal_integrals(w.values)
    return [a / b for a, b in zip(num, den)]


def sawyer_testing(w, sigma, p: float) -> float:
    """``max_Q (int_Q M_d(sigma chi_Q)^p w / sigma(Q))^{1/p}``."""
    w, sigma = as_weight(w), as_weight(sigma)
    integrals = local_maximal_integrals(sigma.values, power=p, against=w.values)
    return _level_max([integrals[k] / sigma.mass[k] for k in range(w.depth + 1)]) ** (1.0 / p)


# -- operator norms -------------------------------------------------------------

def _as_matrix(T) -> np.ndarray:
    if isinstance(T, HaarShift):
        return shift_as_matrix(T)
    return np.asarray(T, dtype=float)


def spectral_norm(mat: np.ndarray) -> float:
    """Largest singular value; Lanczos for large matrices, dense SVD otherwise."""
    if min(mat.shape) <= 512:
        return float(np.linalg.norm(mat, 2))
    s = svds(mat, k=1, tol=1e-12, return_singular_vectors=False, random_state=0)
    return float(s[0])


def weighted_l2_norm_exact(T, w, guard: int = MATRIX_DEPTH_GUARD) -> float:
    """``||T||_{B(L^2(w))}`` as the top singular value of ``D^{1/2} T D^{-1/2}``."""
    w = as_weight(w)
    if w.depth > guard:
        raise ValueError(f"depth {w.depth} exceeds the exact-norm guard {guard}")
    mat = _as_matrix(T)
    s = np.sqrt(w.values)
    return spectral_norm(s[:, None] * mat / s[None, :])


def _operator_callable(op) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(op, HaarShift):
        return lambda F: np.asarray(apply_shift(op, F))
    if isinstance(op, str):
        if op in ("maximal", "M_d"):
            return lambda F: np.asarray(dyadic_maximal(F))
        raise ValueError(f"unknown operator name {op!r}")
    if isinstance(op, np.ndarray):
        return lambda F: op @ F
    return lambda F: np.asarray(op(F))


def _lp_norms(F: np.ndarray, w: np.ndarray, p: float) -> np.ndarray:
    leaf = 1.0 / w.size
    return ((np.abs(F) ** p * w[:, None]).sum(axis=0) * leaf) ** (1.0 / p)


def search_family(w: Weight, p: float) -> np.ndarray:
    """Columns: leaf indicators, cube indicators and ``sigma chi_Q`` for every cube."""
    n = w.grid.n_leaves
    sigma = dual_weight(w, p).values
    cols = [np.eye(n)]
    for k in range(w.depth):
        span = n >> k
        ind = np.zeros((n, 1 << k))
        ind[np.arange(n), np.arange(n) // span] = 1.0
        cols.append(ind)
        cols.append(ind * sigma[:, None])
    return np.hstack(cols)


def weighted_lp_norm_estimate(op, w, p: float, budget: int = 0, seed: int = 0, source_weight=None) -> float:
    """Certified lower bound for ``||op||_{B(L^p(w))}``.

    Without ``source_weight`` the ratio is ``||Tf||_{L^p(w)} / ||f||_{L^p(w)}``;
    with it the denominator uses ``L^p(source_weight)`` (two-weight norms).
    Starts from :func:`search_family` and then runs ``budget`` steps of a
    seeded multiplicative random ascent from the best candidate.  The RNG
    stream does not depend on ``budget``, so the estimate is nondecreasing in
    ``budget``.
    """
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    w = as_weight(w)
    src = w if source_weight is None else as_weight(source_weight)
    T = _operator_callable(op)
    F = search_family(src, p)
    num = _lp_norms(T(F), w.values, p)
    den = _lp_norms(F, src.values, p)
    ratios = num / den
    best = int(np.argmax(ratios))
    best_ratio, f = float(ratios[best]), F[:, best].copy()
    rng = np.random.default_rng(seed)
    n = f.size
    for step in range(budget):
        scale = 0.5 / (1 + step / 50)
        trial = f * np.exp(scale * rng.standard_normal(n))
        if rng.random() < 0.3:
            trial[rng.integers(n)] += scale * np.abs(f).max() * rng.standard_normal()
        val = float(_lp_norms(T(trial[:, None]), w.values, p)[0] / _lp_norms(trial[:, None], src.values, p)[0])
        if val > best_ratio:
            best_ratio, f = val, trial
    return best_ratio


# -- report -------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantsReport:
    p: float
    ap: float
    ainfty_hruscev: float
    ainfty_wilson: float
    dual_ap: float
    dual_ainfty_hruscev: float
    dual_ainfty_wilson: float
    a_p_pair: float
    b_p_pair: float
    rhi_exponent: float
    a1: float = 1.0

    @classmethod
    def ones(cls, p: float = 2.0) -> "ConstantsReport":
        return cls(p, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0 + 1.0 / RHI_TAU, 1.0)

    def to_dict(self) -> dict:
        return dict(sorted(asdict(self).items()))


def constants_report(w, p: float = 2.0, tau: float = RHI_TAU) -> ConstantsReport:
    w = as_weight(w)
    sigma = dual_weight(w, p)
    wil = ainfty_wilson(w)
    pair = two_weight_bp(w, sigma, p)
    return ConstantsReport(
        p=float(p),
        ap=ap_constant(w, p),
        ainfty_hruscev=ainfty_hruscev(w),
        ainfty_wilson=wil,
        dual_ap=ap_constant(sigma, conjugate(p)),
        dual_ainfty_hruscev=ainfty_hruscev(sigma),
        dual_ainfty_wilson=ainfty_wilson(sigma),
        a_p_pair=pair.a_p,
        b_p_pair=pair.b_p,
        rhi_exponent=1.0 + 1.0 / (tau * wil),
        a1=a1_constant(w),
    )
