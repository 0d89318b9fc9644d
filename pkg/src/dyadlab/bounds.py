"""Right-hand sides of the weighted norm inequalities.

Each bound splits into an explicit constant (when one is known) times a
constant-free core built from a :class:`ConstantsReport`.  Extrapolation acts
on bound functions ``phi(x, y, z)`` of the triple

    x = [w]_{A_s},  y = [w]_{A_inf},  z = [w^{-1/(s-1)}]_{A_inf}^{s-1}

(Hruscev constants) at the exponent ``s`` where the bound is known.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from .constants import ConstantsReport
from .grid import conjugate

Phi = Callable[[float, float, float], float]


@dataclass(frozen=True)
class BoundExpr:
    name: str
    core: Callable[[ConstantsReport, float], float]
    has_unspecified_dimensional_constant: bool
    explicit_constant: Optional[Callable[[float], float]] = None

    def evaluate(self, cr: ConstantsReport, p: float | None = None) -> float:
        """Explicit constant times core (core alone when the constant is unnamed)."""
        p = cr.p if p is None else p
        c = self.explicit_constant(p) if self.explicit_constant is not None else 1.0
        return c * self.core(cr, p)


def _check_p(p: float) -> None:
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")


def _same_p(cr: ConstantsReport, p: float) -> None:
    _check_p(p)
    if not math.isclose(cr.p, p, rel_tol=1e-12):
        raise ValueError(f"report was computed at p={cr.p}, bound requested at p={p}")


def bound_buckley(cr: ConstantsReport, p: float) -> float:
    """``p' [w]_{A_p}^{1/(p-1)}``."""
    _same_p(cr, p)
    return conjugate(p) * cr.ap ** (1.0 / (p - 1.0))


def mixed_maximal_constant(p: float) -> float:
    return 4.0 * math.e * conjugate(p)


class MixedMaximalBound(NamedTuple):
    b_p_form: float
    ap_ainfty_form: float


def bound_mixed_maximal(cr: ConstantsReport, p: float) -> MixedMaximalBound:
    """``4e p' B_p^{1/p}`` and ``4e p' ([w]_{A_p} [sigma]'_{A_inf})^{1/p}``."""
    _same_p(cr, p)
    c = mixed_maximal_constant(p)
    return MixedMaximalBound(
        c * cr.b_p_pair ** (1.0 / p),
        c * (cr.ap * cr.dual_ainfty_wilson) ** (1.0 / p),
    )


def bound_a2_shift(cr: ConstantsReport, r: int = 0) -> float:
    """``(r+1)^2 [w]_{A_2}^{1/2} ([w]'_{A_inf} + [sigma]'_{A_inf})^{1/2}``."""
    _same_p(cr, 2.0)
    return (r + 1) ** 2 * math.sqrt(cr.ap) * math.sqrt(cr.ainfty_wilson + cr.dual_ainfty_wilson)


class CZApBound(NamedTuple):
    lower_form: float | None
    upper_form: float | None
    lower_full: float | None
    upper_full: float | None


def bound_cz_ap(cr: ConstantsReport, p: float) -> CZApBound:
    """Cores of the ``L^p(w)`` bound for shifts in both ranges of ``p``.

    The ``lower`` forms apply for ``p <= 2`` and the ``upper`` ones for
    ``p >= 2``; entries outside their range are ``None``.
    """
    _same_p(cr, p)
    ap = cr.ap
    hw, hs = cr.ainfty_hruscev, cr.dual_ainfty_hruscev
    lower = lower_full = upper = upper_full = None
    if p <= 2:
        lower = ap ** (2 / p) * cr.dual_ainfty_wilson ** (2 / p - 1)
        lower_full = (
            ap ** (2 / p - 0.5)
            * (hw ** 0.5 + hs ** ((p - 1) / 2))
            * cr.dual_ainfty_wilson ** (2 / p - 1)
        )
    if p >= 2:
        q = 1.0 / (2 * (p - 1))
        upper = ap ** (2 / p) * cr.ainfty_wilson ** (1 - 2 / p)
        upper_full = ap ** (2 / p - q) * (hw ** q + hs ** 0.5) * cr.ainfty_wilson ** (1 - 2 / p)
    return CZApBound(lower, upper, lower_full, upper_full)


def shift_phi(x: float, y: float, z: float) -> float:
    """The A_2 shift bound as a function of the Hruscev triple at exponent 2."""
    return math.sqrt(x) * math.sqrt(y + z)


def phi_triple(cr: ConstantsReport) -> tuple[float, float, float]:
    """``(x, y, z)`` at the report's exponent."""
    return cr.ap, cr.ainfty_hruscev, cr.dual_ainfty_hruscev ** (cr.p - 1)


def maximal_norm_bound(cr: ConstantsReport) -> float:
    """``4e p' ([w]_{A_p} [sigma]'_{A_inf})^{1/p}``, a bound for ``||M_d||_{B(L^p(w))}``."""
    return mixed_maximal_constant(cr.p) * (cr.ap * cr.dual_ainfty_wilson) ** (1.0 / cr.p)


def dual_maximal_norm_bound(cr: ConstantsReport) -> float:
    """Bound for ``||M_d||`` on ``L^{p'}(sigma)``: ``4e p ([w]_{A_p}^{1/(p-1)} [w]'_{A_inf})^{1/p'}``."""
    pp = conjugate(cr.p)
    return mixed_maximal_constant(pp) * (cr.dual_ap * cr.ainfty_wilson) ** (1.0 / pp)


def extrapolate_lower(phi: Phi, r: float, p: float) -> Callable[[float, float, float, float], float]:
    """Bound at ``p < r`` from a bound ``phi`` known at ``r``.

    Returns ``(K, x, y, z) -> 2 phi(K^{r-p} x, K^{r-p} y, K^{r-p} z)``, where
    the triple is taken at ``p`` and ``K = 2 ||M||_{B(L^p(w))}`` (measured or
    replaced by an upper bound such as :func:`maximal_norm_bound`).
    """
    _check_p(p)
    if p > r:
        raise ValueError("lower extrapolation needs p <= r")

    def bound(K: float, x: float, y: float, z: float) -> float:
        s = K ** (r - p)
        return 2.0 * phi(s * x, s * y, s * z)

    return bound


def extrapolate_upper(phi: Phi, r: float, p: float) -> Callable[[float, float, float, float], float]:
    """Bound at ``p > r`` from a bound ``phi`` known at ``r``.

    Returns ``(K, x, y, z) -> 2 phi(K^e x^g, K^e y^g, K^e z^g)`` with
    ``e = (p-r)/(p-1)``, ``g = (r-1)/(p-1)``, the triple taken at ``p`` and
    ``K = 2 ||M||_{B(L^{p'}(sigma))}`` or an upper bound for it.
    """
    _check_p(r)
    if p < r:
        raise ValueError("upper extrapolation needs p >= r")
    e = (p - r) / (p - 1)
    g = (r - 1) / (p - 1)

    def bound(K: float, x: float, y: float, z: float) -> float:
        s = K ** e
        return 2.0 * phi(s * x ** g, s * y ** g, s * z ** g)

    return bound


def extrapolated_shift_bound(cr: ConstantsReport, measured_maximal: float | None = None) -> float:
    """The shift bound carried from exponent 2 to the report's ``p``."""
    p = cr.p
    x, y, z = phi_triple(cr)
    if p <= 2:
        K = 2.0 * (measured_maximal if measured_maximal is not None else maximal_norm_bound(cr))
        return extrapolate_lower(shift_phi, 2.0, p)(K, x, y, z)
    K = 2.0 * (measured_maximal if measured_maximal is not None else dual_maximal_norm_bound(cr))
    return extrapolate_upper(shift_phi, 2.0, p)(K, x, y, z)


def bound_a1_strong(a1: float, ainfty_w: float, p: float) -> float:
    """``p p' [w]_{A_1}^{1/p} ([w]'_{A_inf})^{1/p'}``."""
    _check_p(p)
    pp = conjugate(p)
    return p * pp * a1 ** (1.0 / p) * ainfty_w ** (1.0 / pp)


def bound_a1_classical(a1: float, p: float) -> float:
    """``p p' [w]_{A_1}``, the bound the mixed form improves on."""
    _check_p(p)
    return p * conjugate(p) * a1


def bound_a1_weak(a1: float, ainfty_w: float) -> float:
    """``[w]_{A_1} log(e + [w]'_{A_inf})``."""
    return a1 * math.log(math.e + ainfty_w)


def bound_a1_dual_weak(a1: float, ainfty_w: float) -> float:
    """``[w]'_{A_inf} log(e + [w]_{A_1})``."""
    return ainfty_w * math.log(math.e + a1)


def bound_commutator(cr: ConstantsReport, k: int = 1) -> float:
    """``[w]_{A_2}^{1/2} ([w]'_{A_inf} + [sigma]'_{A_inf})^{k+1/2}`` per unit ``||b||_BMO^k``."""
    _same_p(cr, 2.0)
    if k < 1:
        raise ValueError("commutator order must be at least 1")
    return math.sqrt(cr.ap) * (cr.ainfty_wilson + cr.dual_ainfty_wilson) ** (k + 0.5)


def conjugation_radius(cr: ConstantsReport, bmo: float, eps_d: float = 1.0) -> float:
    """Admissible ``|z|`` for the ``e^{zb}`` conjugation, up to the unnamed ``eps_d``."""
    if bmo <= 0:
        return math.inf
    return eps_d / (bmo * (cr.ainfty_wilson + cr.dual_ainfty_wilson))


def bound_commutator_phi(phi: Callable[[float, float, float], float], cr: ConstantsReport, bmo: float) -> float:
    """First-order commutator bound from a general bound ``phi(A_2, [w]', [sigma]')``.

    Dimensional constants are set to 1, so this is a core.
    """
    return bmo * (cr.ainfty_wilson + cr.dual_ainfty_wilson) * phi(cr.ap, cr.ainfty_wilson, cr.dual_ainfty_wilson)


def bound_bmo_embedding(ainfty_w: float) -> float:
    """``||f||_{BMO(w)} <= c [w]'_{A_inf} ||f||_{BMO}``; returns the core."""
    return ainfty_w


# pinned constants of the dyadic statements
M0_CONSTANT = math.e
LLOGL_CONSTANT = 4.0
PACKING_CONSTANT = 2.0
JOHN_NIRENBERG_ALPHA = 1.0 / 8.0
RHI_BOUND = 2.0


def bmo_of_log_bound(ainfty_h: float) -> float:
    """``log(2e [w]_{A_inf})``."""
    return math.log(2 * math.e * ainfty_h)


def carleson_constant(p: float) -> float:
    """``(p')^p`` in ``sum a_Q <f>_Q^p <= A (p')^p ||f||^p``."""
    return conjugate(p) ** p


def two_valued_wilson_bound(t: float, general_position: bool) -> float:
    """``1 + log 2`` for a half-interval set, ``4 log t`` for an arbitrary set."""
    return 4 * math.log(t) if general_position else 1 + math.log(2)


BOUNDS = {
    "buckley": BoundExpr("buckley", bound_buckley, True),
    "mixed_maximal": BoundExpr(
        "mixed_maximal", lambda cr, p: cr.b_p_pair ** (1.0 / p), False, mixed_maximal_constant
    ),
    "a2_shift": BoundExpr("a2_shift", lambda cr, p: bound_a2_shift(cr, 0), True),
    "cz_ap": BoundExpr(
        "cz_ap",
        lambda cr, p: next(v for v in bound_cz_ap(cr, p)[:2] if v is not None),
        True,
    ),
    "a1_strong": BoundExpr("a1_strong", lambda cr, p: bound_a1_strong(cr.a1, cr.ainfty_wilson, p), True),
    "a1_weak": BoundExpr("a1_weak", lambda cr, p: bound_a1_weak(cr.a1, cr.ainfty_wilson), True),
    "a1_dual_weak": BoundExpr("a1_dual_weak", lambda cr, p: bound_a1_dual_weak(cr.a1, cr.ainfty_wilson), True),
    "commutator": BoundExpr("commutator", lambda cr, p: bound_commutator(cr, 1), True),
    "bmo_embedding": BoundExpr("bmo_embedding", lambda cr, p: bound_bmo_embedding(cr.ainfty_wilson), True),
}
