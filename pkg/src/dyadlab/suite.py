"""Named numerical checks of the weighted inequalities.

Each check returns a :class:`CheckResult`.  ``hard`` checks assert an
inequality with a pinned constant (or a required stability property);
soft ones are exploratory and only report.  Controls are checks that are
expected to detect a violation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bounds as B
from .constants import (
    RHI_TAU,
    a1_constant,
    ainfty_hruscev,
    ainfty_wilson,
    ap_constant,
    bmo_levels,
    bmo_norm,
    constants_report,
    llogl_ratios,
    rhi_constant,
    rhi_exponent,
    rhi_inverse_bound,
    rhi_verify,
    sawyer_testing,
    search_family,
    two_weight_bp,
    weighted_l2_norm_exact,
    weighted_lp_norm_estimate,
)
from .grid import (
    DyadicGrid,
    Weight,
    WeightFamilySpec,
    conjugate,
    cube_means,
    dual_weight,
    materialize,
    random_weight,
)
from .operators import (
    a2_band_filter,
    dyadic_maximal,
    log_maximal,
    principal_cubes,
    weak_quasinorm,
)
from .shifts import apply_shift, build_shift, commutator_matrix

TOL = 1e-9


@dataclass
class CheckResult:
    name: str
    hard: bool
    passed: bool
    details: dict = field(default_factory=dict)
    fitted_constant: float | None = None
    control: bool = False

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        kind = "control" if self.control else ("hard" if self.hard else "soft")
        fitted = "" if self.fitted_constant is None else f" fitted={self.fitted_constant:.4g}"
        return f"[{tag}] {self.name} ({kind}){fitted}"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "hard": self.hard,
            "control": self.control,
            "passed": bool(self.passed),
            "fitted_constant": self.fitted_constant,
            "details": _jsonable(self.details),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 42
    depth: int = 8
    n_weights: int = 200
    n_functions: int = 50
    budget: int = 0
    tau: float = RHI_TAU
    negative_tau: float = 2.0
    depths: tuple = (6, 8, 10)
    t_grid: tuple = tuple(2.0 ** k for k in range(2, 15))
    n_random_shifts: int = 10
    stability: float = 0.2


def _rng(cfg: SuiteConfig, salt: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, salt])


def _weights(cfg: SuiteConfig, salt: int, depth: int | None = None, count: int | None = None):
    rng = _rng(cfg, salt)
    grid = DyadicGrid(cfg.depth if depth is None else depth)
    return [random_weight(grid, rng) for _ in range(cfg.n_weights if count is None else count)]


def _two_valued(t: float, depth: int, E="left_half") -> Weight:
    return materialize(WeightFamilySpec.two_valued(t, E), DyadicGrid(depth))


def _stable(values) -> float:
    """Largest relative deviation from the mean."""
    arr = np.asarray(values, dtype=float)
    return float(np.max(np.abs(arr / arr.mean() - 1)))


# -- golden values ----------------------------------------------------------------

def check_two_valued_golden(cfg: SuiteConfig, ts=(3.0, 10.0, 100.0), rtol: float = 1e-9) -> CheckResult:
    rows = {}
    ok = True
    for t in ts:
        w = _two_valued(t, cfg.depth)
        ap = ap_constant(w, 2.0)
        h = ainfty_hruscev(w)
        ap_exact = (t + 1) ** 2 / (4 * t)
        h_exact = (t + 1) / (2 * math.sqrt(t))
        err = max(abs(ap / ap_exact - 1), abs(h / h_exact - 1))
        ok &= err <= rtol
        rows[t] = {"ap": ap, "ap_closed": ap_exact, "hruscev": h, "hruscev_closed": h_exact, "rel_err": err}
    return CheckResult("two_valued_golden", True, ok, rows)


def check_two_valued_wilson(cfg: SuiteConfig, n_sets: int = 5) -> CheckResult:
    half = {}
    ok = True
    for k in range(1, 17):
        t = 2.0 ** k
        W = ainfty_wilson(_two_valued(t, cfg.depth))
        half[t] = W
        ok &= W <= B.two_valued_wilson_bound(t, False) + TOL
    rng = _rng(cfg, 2)
    grid = DyadicGrid(cfg.depth)
    general = {}
    worst = 0.0
    for t in [3.0] + [2.0 ** k for k in range(2, 17)]:
        vals = []
        for _ in range(n_sets):
            size = int(rng.integers(1, grid.n_leaves))
            E = rng.choice(grid.n_leaves, size=size, replace=False)
            W = ainfty_wilson(_two_valued(t, cfg.depth, E))
            vals.append(W)
            worst = max(worst, W / B.two_valued_wilson_bound(t, True))
        general[t] = max(vals)
    ok &= worst <= 1 + TOL
    return CheckResult(
        "two_valued_wilson", True, bool(ok),
        {"left_half": half, "general_position_max": general, "worst_general_ratio_to_4logt": worst},
    )


# -- explicit-constant theorems --------------------------------------------------

def _random_functions(rng, n: int, count: int, positive: bool = True) -> np.ndarray:
    F = rng.lognormal(0.0, 1.5, size=(n, count))
    # localize a third of them to random dyadic cubes
    depth = int(math.log2(n))
    for c in range(0, count, 3):
        k = int(rng.integers(0, depth + 1))
        j = int(rng.integers(0, 1 << k))
        span = n >> k
        mask = np.zeros(n)
        mask[j * span:(j + 1) * span] = 1.0
        F[:, c] *= mask
    if not positive:
        F *= rng.choice([-1.0, 1.0], size=F.shape)
    return F


def _lp(F: np.ndarray, w: np.ndarray, p: float) -> np.ndarray:
    return ((np.abs(F) ** p * w[:, None]).mean(axis=0)) ** (1.0 / p)


def check_mixed_maximal(cfg: SuiteConfig, ps=(1.5, 2.0, 3.0)) -> CheckResult:
    rng = _rng(cfg, 3)
    grid = DyadicGrid(cfg.depth)
    violations = 0
    worst = 0.0
    count = 0
    for _ in range(cfg.n_weights):
        w = random_weight(grid, rng)
        sigma = random_weight(grid, rng)
        F = _random_functions(rng, grid.n_leaves, cfg.n_functions)
        MF = np.asarray(dyadic_maximal(F * sigma.values[:, None]))
        for p in ps:
            bp = two_weight_bp(w, sigma, p).b_p
            bound = B.mixed_maximal_constant(p) * bp ** (1.0 / p)
            ratio = _lp(MF, w.values, p) / (_lp(F, sigma.values, p) * bound)
            violations += int(np.sum(ratio > 1 + TOL))
            worst = max(worst, float(ratio.max()))
            count += ratio.size
    return CheckResult(
        "mixed_maximal", True, violations == 0,
        {"violations": violations, "tests": count, "worst_measured_over_bound": worst},
    )


def check_rhi(cfg: SuiteConfig, count: int = 500, depths=None, tau: float | None = None) -> CheckResult:
    tau = cfg.tau if tau is None else tau
    depths = cfg.depths if depths is None else depths
    violations = 0
    worst = 0.0
    per_depth = {}
    for d in depths:
        ws = _weights(cfg, 4 + d, depth=d, count=count)
        ratios = [rhi_verify(w, rhi_exponent(w, tau)).worst_ratio for w in ws]
        violations += sum(r > B.RHI_BOUND for r in ratios)
        per_depth[d] = max(ratios)
        worst = max(worst, max(ratios))
    return CheckResult(
        "rhi", True, violations == 0,
        {"tau": tau, "violations": violations, "worst_ratio": worst, "worst_by_depth": per_depth},
    )


def negative_control_family(cfg: SuiteConfig, count: int = 500) -> list[Weight]:
    """Weights with large reverse Holder ratios: random, spikes and near-critical powers."""
    ws = _weights(cfg, 4 + cfg.depth, count=count)
    for d in (8, 12, 16):
        grid = DyadicGrid(d)
        for k in range(1, 8):
            ws.append(materialize(WeightFamilySpec.power(-1 + 2.0 ** -k), grid))
        for h in (1e1, 1e3, 1e6):
            vals = np.ones(grid.n_leaves)
            vals[0] = h * grid.n_leaves
            ws.append(Weight(vals, grid))
        j = np.floor(-np.log2((np.arange(grid.n_leaves) + 0.5) / grid.n_leaves))
        ws.append(Weight(2.0 ** j, grid))
    return ws


def check_rhi_negative_control(cfg: SuiteConfig, tau: float | None = None, count: int = 500) -> CheckResult:
    tau = cfg.negative_tau if tau is None else tau
    ratios = [rhi_verify(w, rhi_exponent(w, tau)).worst_ratio for w in negative_control_family(cfg, count)]
    violations = sum(r > B.RHI_BOUND for r in ratios)
    return CheckResult(
        "rhi_negative_control", True, violations >= 1,
        {"tau": tau, "violations": violations, "weights": len(ratios), "worst_ratio": max(ratios)},
        control=True,
    )


def check_m0(cfg: SuiteConfig, ps=(0.5, 1.0, 2.0)) -> CheckResult:
    rng = _rng(cfg, 5)
    n = 1 << cfg.depth
    F = _random_functions(rng, n, cfg.n_weights) + 1e-300
    F = np.where(F > 0, F, rng.uniform(1e-3, 1.0, size=F.shape))
    M0 = np.asarray(log_maximal(F))
    worst = 0.0
    violations = 0
    for p in ps:
        ratio = (M0 ** p).mean(axis=0) / (F ** p).mean(axis=0)
        violations += int(np.sum(ratio > B.M0_CONSTANT * (1 + TOL)))
        worst = max(worst, float(ratio.max()))
    return CheckResult("m0_bound", True, violations == 0, {"violations": violations, "worst_ratio": worst, "constant": B.M0_CONSTANT})


def _packing_sum(pc, w: Weight) -> float:
    return float(sum(w.mass[k][j] for k, j in pc.cubes))


def check_packing(cfg: SuiteConfig) -> CheckResult:
    ws = _weights(cfg, 6)
    worst = 0.0
    worst_e = np.inf
    violations = 0
    for w in ws:
        sigma = Weight(1.0 / w.values, w.grid)
        W = ainfty_wilson(w)
        pc = principal_cubes(sigma)
        ratio = _packing_sum(pc, w) / (B.PACKING_CONSTANT * W * w.mass[0][0])
        worst_e = min(worst_e, float(np.min(pc.e_sizes() / pc.sizes())))
        a_max = int(math.floor(math.log2(ap_constant(w, 2.0)))) + 1
        for a in range(0, a_max + 1):
            band = a2_band_filter(w, a)
            if not any(m.any() for m in band):
                continue
            pcf = principal_cubes(sigma, cube_filter=band)
            roots = pcf.generation == 0
            base = sum(w.mass[k][j] for (k, j), g0 in zip(pcf.cubes, roots) if g0)
            ratio = max(ratio, _packing_sum(pcf, w) / (B.PACKING_CONSTANT * W * base))
            worst_e = min(worst_e, float(np.min(pcf.e_sizes() / pcf.sizes())))
        violations += int(ratio > 1 + TOL)
        worst = max(worst, ratio)
    return CheckResult(
        "principal_packing", True, violations == 0 and worst_e >= 0.5,
        {"violations": violations, "worst_ratio": worst, "min_E_fraction": worst_e},
    )


def check_carleson(cfg: SuiteConfig, ps=(1.5, 2.0, 3.0)) -> CheckResult:
    rng = _rng(cfg, 7)
    grid = DyadicGrid(cfg.depth)
    violations = 0
    worst = 0.0
    for _ in range(cfg.n_weights):
        sigma = random_weight(grid, rng)
        # sparse random cube weights, then the exact Carleson constant
        a = [rng.exponential(1.0, size=1 << k) * (rng.random(1 << k) < 0.3) * sigma.mass[k] for k in range(grid.depth + 1)]
        sub = [x.copy() for x in a]
        for k in range(grid.depth - 1, -1, -1):
            sub[k] = sub[k] + sub[k + 1][0::2] + sub[k + 1][1::2]
        A = max(float(np.max(sub[k] / sigma.mass[k])) for k in range(grid.depth + 1))
        if A == 0:
            continue
        F = _random_functions(rng, grid.n_leaves, cfg.n_functions)
        avg = [m / sigma.average(k)[:, None] for k, m in enumerate(cube_means(F * sigma.values[:, None]))]
        for p in ps:
            lhs = sum((a[k][:, None] * avg[k] ** p).sum(axis=0) for k in range(grid.depth + 1))
            rhs = A * B.carleson_constant(p) * (_lp(F, sigma.values, p) ** p)
            ratio = lhs / rhs
            violations += int(np.sum(ratio > 1 + TOL))
            worst = max(worst, float(ratio.max()))
    return CheckResult("carleson_embedding", True, violations == 0, {"violations": violations, "worst_ratio": worst})


def check_llogl(cfg: SuiteConfig) -> CheckResult:
    worst = max(max(float(np.max(r)) for r in llogl_ratios(w)) for w in _weights(cfg, 9))
    return CheckResult("llogl", True, worst <= B.LLOGL_CONSTANT + TOL, {"worst_ratio": worst, "constant": B.LLOGL_CONSTANT})


def check_bmo_log(cfg: SuiteConfig) -> CheckResult:
    worst = 0.0
    for w in _weights(cfg, 10):
        worst = max(worst, bmo_norm(np.log(w.values)) / B.bmo_of_log_bound(ainfty_hruscev(w)))
    return CheckResult("bmo_of_log", True, worst <= 1 + TOL, {"worst_ratio": worst})


# -- structural invariants ------------------------------------------------------

def check_constant_chain(cfg: SuiteConfig, ps=(1.5, 2.0, 3.0)) -> CheckResult:
    """Wilson <= e Hruscev, Hruscev <= A_p, A_p duality, B_p sandwich."""
    worst = {"wilson_over_e_hruscev": 0.0, "hruscev_over_ap": 0.0, "duality_err": 0.0, "bp_sandwich": 0.0, "ap_over_bp": 0.0}
    rng = _rng(cfg, 11)
    for w in _weights(cfg, 11):
        h = ainfty_hruscev(w)
        worst["wilson_over_e_hruscev"] = max(worst["wilson_over_e_hruscev"], ainfty_wilson(w) / (math.e * h))
        sigma_pair = random_weight(w.grid, rng)
        for p in ps:
            ap = ap_constant(w, p)
            worst["hruscev_over_ap"] = max(worst["hruscev_over_ap"], h / ap)
            dual = ap_constant(dual_weight(w, p), conjugate(p)) ** (p - 1)
            worst["duality_err"] = max(worst["duality_err"], abs(dual / ap - 1))
            pair = two_weight_bp(w, sigma_pair, p)
            worst["ap_over_bp"] = max(worst["ap_over_bp"], pair.a_p / pair.b_p)
            worst["bp_sandwich"] = max(worst["bp_sandwich"], pair.b_p / (pair.a_p * ainfty_hruscev(sigma_pair)))
    ok = (
        worst["wilson_over_e_hruscev"] <= 1 + TOL
        and worst["hruscev_over_ap"] <= 1 + TOL
        and worst["duality_err"] <= 1e-10
        and worst["ap_over_bp"] <= 1 + TOL
        and worst["bp_sandwich"] <= 1 + TOL
    )
    return CheckResult("constant_chain", True, ok, worst)


def check_shift_invariants(cfg: SuiteConfig, n_subsets: int = 20, n_functions: int = 20) -> CheckResult:
    rng = _rng(cfg, 12)
    grid = DyadicGrid(min(cfg.depth, 8))
    worst_l2 = 0.0
    worst_pointwise = 0.0
    leak = 0.0
    shifts = [build_shift(grid, 0, 1, "petermichl")]
    for s in range(4):
        m, n = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        shifts.append(build_shift(grid, m, n, "random", seed=int(rng.integers(1 << 31)), cancellative=bool(s % 2 == 0)))
    for sha in shifts:
        F = rng.standard_normal((grid.n_leaves, n_functions))
        norms = np.sqrt((F ** 2).mean(axis=0))
        for _ in range(n_subsets):
            masks = {k: rng.random(1 << k) < rng.uniform(0.1, 0.9) for k in sha.levels}
            out = apply_shift(sha, F, restriction=masks)
            worst_l2 = max(worst_l2, float(np.max(np.sqrt((out ** 2).mean(axis=0)) / norms)))
        for k in sha.levels:
            for j in rng.choice(1 << k, size=min(3, 1 << k), replace=False):
                out = apply_shift(sha, F, restriction=[(k, int(j))])
                span = grid.n_leaves >> k
                sl = slice(int(j) * span, (int(j) + 1) * span)
                avg = np.abs(F[sl]).mean(axis=0)
                inside = np.max(np.abs(out[sl]) / avg[None, :])
                if span < grid.n_leaves:
                    leak = max(leak, float(np.max(np.abs(np.delete(out, np.arange(sl.start, sl.stop), axis=0)))))
                worst_pointwise = max(worst_pointwise, float(inside))
    ok = worst_l2 <= 1 + TOL and worst_pointwise <= 1 + TOL and leak == 0.0
    return CheckResult(
        "shift_invariants", True, ok,
        {"worst_l2_ratio": worst_l2, "worst_pointwise_ratio": worst_pointwise, "leak_outside_block": leak},
    )


def check_norm_paths(cfg: SuiteConfig) -> CheckResult:
    """Exact L2(w) norm dominates the search-based lower estimate."""
    grid = DyadicGrid(min(cfg.depth, 8))
    worst = 0.0
    for t in (4.0, 64.0, 1024.0):
        w = _two_valued(t, grid.depth)
        for sha in (build_shift(grid, 0, 1, "petermichl"), build_shift(grid, 1, 1, "random", seed=cfg.seed)):
            exact = weighted_l2_norm_exact(sha, w)
            est = weighted_lp_norm_estimate(sha, w, 2.0, budget=cfg.budget, seed=cfg.seed)
            worst = max(worst, est / exact)
    return CheckResult("norm_paths", True, worst <= 1 + 1e-9, {"worst_estimate_over_exact": worst})


def check_sawyer(cfg: SuiteConfig, ps=(1.5, 2.0, 3.0), count: int = 30) -> CheckResult:
    """Testing constant vs the two-weight maximal norm estimate, both directions."""
    grid = DyadicGrid(min(cfg.depth, 7))
    rng = _rng(cfg, 13)
    lower_ok = True
    fitted = 0.0
    for _ in range(count):
        w, sigma = random_weight(grid, rng), random_weight(grid, rng)
        for p in ps:
            test = sawyer_testing(w, sigma, p)
            est = weighted_lp_norm_estimate(
                lambda F: np.asarray(dyadic_maximal(F * sigma.values.reshape((-1,) + (1,) * (F.ndim - 1)))),
                w, p, budget=cfg.budget, seed=cfg.seed, source_weight=sigma,
            )
            est = max(est, test)
            lower_ok &= test <= est * (1 + TOL)
            fitted = max(fitted, est / test)
    return CheckResult(
        "sawyer_testing", False, bool(lower_ok),
        {"testing_below_norm": bool(lower_ok), "max_norm_over_testing": fitted},
        fitted_constant=fitted,
    )


# -- fitted-constant theorems -----------------------------------------------------

def shift_family(grid: DyadicGrid, cfg: SuiteConfig):
    rng = _rng(cfg, 14)
    out = [("petermichl", build_shift(grid, 0, 1, "petermichl"))]
    for _ in range(cfg.n_random_shifts):
        m, n = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        seed = int(rng.integers(1 << 31))
        out.append((f"random({m},{n})#{seed}", build_shift(grid, m, n, "random", seed=seed, invariant=True)))
    return out


def shift_trend(cfg: SuiteConfig) -> dict:
    """Exact L2(w) shift norms over two-valued weights at several depths."""
    table = {}
    for d in cfg.depths:
        grid = DyadicGrid(d)
        reports = {t: constants_report(_two_valued(t, d), 2.0) for t in cfg.t_grid}
        weights = {t: _two_valued(t, d) for t in cfg.t_grid}
        for name, sha in shift_family(grid, cfg):
            T = sha.matrix()
            rows = []
            for t in cfg.t_grid:
                cr = reports[t]
                norm = weighted_l2_norm_exact(T, weights[t])
                rows.append((t, norm, B.bound_a2_shift(cr, sha.complexity), cr.ap))
            table[(name, d)] = rows
    return table


def check_shift_sharpness(cfg: SuiteConfig, table: dict | None = None) -> CheckResult:
    table = shift_trend(cfg) if table is None else table
    names = sorted({name for name, _ in table})
    details = {}
    stable_ok = True
    decreasing_ok = True
    fitted_all = 0.0
    ref_depth = cfg.depth if cfg.depth in cfg.depths else cfg.depths[len(cfg.depths) // 2]
    for name in names:
        fits = [max(norm / core for _, norm, core, _ in table[(name, d)]) for d in cfg.depths]
        dev = _stable(fits)
        ratios = [(t, norm / ap) for t, norm, _, ap in table[(name, ref_depth)] if t >= 16]
        dec = all(b[1] < a[1] for a, b in zip(ratios, ratios[1:]))
        stable_ok &= dev <= cfg.stability
        decreasing_ok &= dec
        fitted_all = max(fitted_all, max(fits))
        details[name] = {"fitted_by_depth": dict(zip(cfg.depths, fits)), "deviation": dev, "ratio_decreasing": dec}
    details["stable"] = stable_ok
    details["decreasing"] = decreasing_ok
    return CheckResult("shift_a2_sharpness", True, stable_ok and decreasing_ok, details, fitted_constant=fitted_all)


def check_commutator(cfg: SuiteConfig, stability: float = 0.3) -> CheckResult:
    grid = DyadicGrid(cfg.depth)
    details = {}
    ok = True
    fitted = 0.0
    shifts = shift_family(grid, cfg)[:4]
    mats = {name: sha.matrix() for name, sha in shifts}
    for name, _ in shifts:
        ratios = []
        for t in cfg.t_grid:
            w = _two_valued(t, cfg.depth)
            cr = constants_report(w, 2.0)
            b = np.log(w.values)
            measured = weighted_l2_norm_exact(commutator_matrix(b, mats[name]), w)
            ratios.append(measured / (B.bound_commutator(cr, 1) * bmo_norm(b)))
        ratios = np.asarray(ratios)
        med = float(np.median(ratios))
        dev = float(np.max(np.abs(ratios / med - 1)))
        ok &= dev <= stability
        fitted = max(fitted, float(ratios.max()))
        details[name] = {"median": med, "deviation": dev}
    return CheckResult("commutator", False, bool(ok), details, fitted_constant=fitted)


def _bmo_search(grid: DyadicGrid, w: Weight) -> np.ndarray:
    n = grid.n_leaves
    logrecip = log_reciprocal(grid)
    cols = [np.log(w.values), logrecip, logrecip[::-1]]
    for k in range(1, grid.depth + 1):
        span = n >> k
        for j in range(0, 1 << k, max(1, (1 << k) // 8)):
            ind = np.zeros(n)
            ind[j * span:(j + 1) * span] = 1.0
            cols.append(ind)
    return np.stack(cols, axis=1)


def bmo_embedding_ratio(w: Weight) -> float:
    F = _bmo_search(w.grid, w)
    best = 0.0
    for c in range(F.shape[1]):
        base = bmo_norm(F[:, c])
        if base > 0:
            best = max(best, bmo_norm(F[:, c], w) / base)
    return best


def log_reciprocal(grid: DyadicGrid) -> np.ndarray:
    """Exact cell averages of ``log(1/x)``."""
    edges = np.arange(grid.n_leaves + 1) * grid.leaf_size
    anti = edges - np.where(edges > 0, edges * np.log(np.where(edges > 0, edges, 1.0)), 0.0)
    return np.diff(anti) / grid.leaf_size


def check_bmo_embedding(cfg: SuiteConfig) -> CheckResult:
    fits = []
    for d in cfg.depths:
        fits.append(max(bmo_embedding_ratio(_two_valued(t, d)) / ainfty_wilson(_two_valued(t, d)) for t in cfg.t_grid))
    random_fit = max(bmo_embedding_ratio(w) / ainfty_wilson(w) for w in _weights(cfg, 15, count=min(cfg.n_weights, 40)))
    dev = _stable(fits)
    return CheckResult(
        "bmo_embedding", True, dev <= cfg.stability,
        {"fitted_by_depth": dict(zip(cfg.depths, fits)), "deviation": dev, "random_weights_fit": random_fit},
        fitted_constant=max(max(fits), random_fit),
    )


def power_weight_bmo_trend(depth: int = 20, ks=range(2, 7)) -> dict:
    grid = DyadicGrid(depth)
    f = log_reciprocal(grid)
    base = bmo_norm(f)
    out = {}
    for k in ks:
        eps = 2.0 ** -k
        w = materialize(WeightFamilySpec.power(-1 + eps), grid)
        out[eps] = bmo_norm(f, w) / base
    return out


def check_bmo_power_trend(cfg: SuiteConfig, depth: int = 20) -> CheckResult:
    """``||log(1/x)||_{BMO(w)} / ||log(1/x)||_BMO >= c / eps`` for ``w = x^{-1+eps}``."""
    trend = power_weight_bmo_trend(depth)
    eps = sorted(trend, reverse=True)
    scaled = {e: trend[e] * e for e in eps}
    c = 0.5 * scaled[eps[0]]
    growing = all(trend[b] > trend[a] for a, b in zip(eps, eps[1:]))
    ok = growing and all(v >= c for v in scaled.values())
    return CheckResult(
        "bmo_power_trend", True, ok,
        {"depth": depth, "ratio": trend, "ratio_times_eps": scaled, "c": c, "growing": growing},
    )


def _a1_family(d: int, ts):
    return [(t, _two_valued(t, d)) for t in ts]


def check_a1(cfg: SuiteConfig, ps=(1.5, 3.0)) -> CheckResult:
    """Fitted constants for the strong, weak and dual weak A_1 bounds, depth-stable."""
    ts = cfg.t_grid[::3]
    fits = {"strong": [], "weak": [], "dual_weak": []}
    for d in cfg.depths:
        grid = DyadicGrid(d)
        sha = build_shift(grid, 0, 1, "petermichl")
        strong = weak = dual = 0.0
        for t, w in _a1_family(grid.depth, ts):
            a1, W = a1_constant(w), ainfty_wilson(w)
            for p in ps:
                est = weighted_lp_norm_estimate(sha, w, p, budget=cfg.budget, seed=cfg.seed)
                strong = max(strong, est / B.bound_a1_strong(a1, W, p))
            F = search_family(w, 2.0)
            TF = np.asarray(apply_shift(sha, F))
            l1w = (np.abs(F) * w.values[:, None]).mean(axis=0)
            l1 = np.abs(F).mean(axis=0)
            wq = np.array([weak_quasinorm(TF[:, c], w) for c in range(F.shape[1])])
            dq = np.array([weak_quasinorm(TF[:, c] / w.values, w) for c in range(F.shape[1])])
            weak = max(weak, float(np.max(wq / l1w)) / B.bound_a1_weak(a1, W))
            dual = max(dual, float(np.max(dq / l1)) / B.bound_a1_dual_weak(a1, W))
        fits["strong"].append(strong)
        fits["weak"].append(weak)
        fits["dual_weak"].append(dual)
    devs = {k: _stable(v) for k, v in fits.items()}
    ok = all(v <= cfg.stability for v in devs.values())
    return CheckResult(
        "a1_family", True, ok,
        {"fitted_by_depth": {k: dict(zip(cfg.depths, v)) for k, v in fits.items()}, "deviation": devs},
        fitted_constant=max(max(v) for v in fits.values()),
    )


def check_rhi_inverse(cfg: SuiteConfig, rs=(1.5, 2.0, 3.0)) -> CheckResult:
    fitted = 0.0
    for w in _weights(cfg, 16, count=min(cfg.n_weights, 100)):
        W = ainfty_wilson(w)
        for r in rs:
            fitted = max(fitted, W / rhi_inverse_bound(max(1.0, rhi_constant(w, r)), r))
    return CheckResult("rhi_inverse", False, bool(np.isfinite(fitted)), {"rs": list(rs)}, fitted_constant=fitted)


def check_john_nirenberg(cfg: SuiteConfig) -> CheckResult:
    betas = []
    for d in cfg.depths:
        grid = DyadicGrid(d)
        beta = 0.0
        fams = [log_reciprocal(grid), np.log(_two_valued(100.0, d).values)]
        for b in fams:
            norm = bmo_norm(b)
            for k, means in enumerate(cube_means(b)):
                dev = np.abs(b.reshape(1 << k, -1) - means[:, None])
                beta = max(beta, float(np.max(np.exp(B.JOHN_NIRENBERG_ALPHA * dev / norm).mean(axis=1))))
        betas.append(beta)
    dev = _stable(betas)
    return CheckResult(
        "john_nirenberg", False, bool(np.all(np.isfinite(betas))) and dev <= cfg.stability,
        {"beta_by_depth": dict(zip(cfg.depths, betas)), "deviation": dev},
        fitted_constant=max(betas),
    )


def check_exponential_decay(cfg: SuiteConfig, levels=range(1, 9)) -> CheckResult:
    """Tail of ``sha_{K^a(S)}(w chi_Q)`` relative to ``<w>_S`` under ``sigma``."""
    grid = DyadicGrid(min(cfg.depth, 8))
    rng = _rng(cfg, 17)
    envelope = np.zeros(len(levels))
    for _ in range(5):
        w = random_weight(grid, rng, "cascade")
        sigma = Weight(1.0 / w.values, grid)
        sha = build_shift(grid, 0, 1, "petermichl") if rng.random() < 0.5 else build_shift(
            grid, int(rng.integers(0, 3)), int(rng.integers(0, 3)), "random", seed=int(rng.integers(1 << 31)))
        for a in range(0, int(math.log2(ap_constant(w, 2.0))) + 2):
            band = a2_band_filter(w, a)
            if not any(m.any() for m in band):
                continue
            pc = principal_cubes(sigma, cube_filter=band)
            cube_owner = [np.full(1 << k, -1) for k in range(grid.depth + 1)]
            for k in range(grid.depth + 1):
                if k:
                    cube_owner[k] = np.repeat(cube_owner[k - 1], 2)
                for idx, (kk, j) in enumerate(pc.cubes):
                    if kk == k:
                        cube_owner[k][j] = idx
            for idx, (k, j) in enumerate(pc.cubes):
                masks = {lv: band[lv] & (cube_owner[lv] == idx) for lv in sha.levels}
                g = np.abs(np.asarray(apply_shift(sha, w.values, restriction=masks)))
                avg = w.average(k)[j]
                sS = sigma.mass[k][j]
                for i, t in enumerate(levels):
                    frac = sigma.measure(g > t * avg) / sS
                    envelope[i] = max(envelope[i], float(frac))
    pos = envelope > 0
    monotone = bool(np.all(np.diff(envelope) <= 1e-12))
    slope = float(np.polyfit(np.asarray(list(levels))[pos], np.log(envelope[pos]), 1)[0]) if pos.sum() >= 2 else -np.inf
    return CheckResult(
        "exponential_decay", False, monotone and slope < 0,
        {"envelope": envelope, "slope": slope, "monotone": monotone},
    )


def check_mixed_vs_buckley(cfg: SuiteConfig) -> CheckResult:
    rows = {}
    ok = True
    for t in (10.0, 100.0, 1000.0):
        cr = constants_report(_two_valued(t, cfg.depth), 2.0)
        mixed = B.bound_mixed_maximal(cr, 2.0).ap_ainfty_form / B.mixed_maximal_constant(2.0)
        buck = B.bound_buckley(cr, 2.0) / conjugate(2.0)
        rows[t] = {"mixed_core": mixed, "buckley_core": buck}
        ok &= mixed < buck
    return CheckResult("mixed_vs_buckley", False, bool(ok), rows)


CHECKS: dict[str, Callable[[SuiteConfig], CheckResult]] = {
    "two_valued_golden": check_two_valued_golden,
    "two_valued_wilson": check_two_valued_wilson,
    "mixed_maximal": check_mixed_maximal,
    "rhi": check_rhi,
    "rhi_negative_control": check_rhi_negative_control,
    "m0_bound": check_m0,
    "principal_packing": check_packing,
    "carleson_embedding": check_carleson,
    "shift_a2_sharpness": check_shift_sharpness,
    "llogl": check_llogl,
    "bmo_of_log": check_bmo_log,
    "bmo_embedding": check_bmo_embedding,
    "bmo_power_trend": check_bmo_power_trend,
    "commutator": check_commutator,
    "constant_chain": check_constant_chain,
    "shift_invariants": check_shift_invariants,
    "norm_paths": check_norm_paths,
    "sawyer_testing": check_sawyer,
    "a1_family": check_a1,
    "rhi_inverse": check_rhi_inverse,
    "john_nirenberg": check_john_nirenberg,
    "exponential_decay": check_exponential_decay,
    "mixed_vs_buckley": check_mixed_vs_buckley,
}

def run_suite(cfg: SuiteConfig, names=None) -> list[CheckResult]:
    names = list(CHECKS) if not names else list(names)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    return [CHECKS[n](cfg) for n in names]


def gating_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results if r.hard)
