"""Optimal constants ``C_p`` for ``E|X - EX|^p <= C_p E|X|^p``.

For ``p > 1`` the constant is the maximum over ``b`` of

    R(p, b) = (b^r + (1-b)^r) * (b^(1/r) + (1-b)^(1/r))^r,   r = p - 1,

attained at a unique ``b_p`` in ``(0, 1/2)`` when ``p != 2``. The maximizer is
located by bisection on the sign of ``d ln R / db``, always in the frame
where ``r < 1`` (the dual exponent is used for ``p > 2``); ``R(p, .)`` is
flat near its maximum, so a sign-based search is better conditioned than a
value-based one.

All routines are pure functions of their arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .distributions import DiscreteDistribution, TwoPointDistribution
from .errors import ConvergenceError, DomainError

EPS = 2.220446049250313e-16

DEFAULT_TOL = 1e-12
DEFAULT_B_TOL = 1e-14
DEFAULT_MAX_ITER = 200
SIGN_RESOLUTION = 1e-12

# relative accuracy a double-precision C_p can promise
TOL_FLOOR = 32.0 * EPS

# exp() overflows above this
_LOG_MAX = 709.0


class Regime(str, Enum):
    SUB_TWO = "sub_two"
    TWO = "two"
    SUPER_TWO = "super_two"


@dataclass(frozen=True)
class Exponent:
    """A moment order ``p > 1`` together with its dual ``q``."""

    p: float
    q: float
    regime: Regime

    @classmethod
    def of(cls, p: float) -> "Exponent":
        p = _check_p(p)
        if p == 2.0:
            return cls(p, 2.0, Regime.TWO)
        q = p / (p - 1.0)
        return cls(p, q, Regime.SUB_TWO if p < 2.0 else Regime.SUPER_TWO)

    @property
    def r(self) -> float:
        return self.p - 1.0


@dataclass(frozen=True)
class RPoint:
    """``R(p, b)``, kept in log form so that huge ``p`` stays representable."""

    p: float
    b: float
    value: float
    log_value: float


class Method(str, Enum):
    SIGN_BISECTION = "sign_bisection"
    DUAL_TRANSFER = "dual_transfer"
    CLOSED_FORM_P2 = "closed_form_p2"
    CLOSED_FORM_P1 = "closed_form_p1"


@dataclass(frozen=True)
class OptimalConstant:
    """Solved constant with its maximizer, shift and solver diagnostics.

    ``b_p`` and ``t_bp`` are ``None`` at ``p = 2`` (every ``b`` maximizes)
    and at ``p = 1``. ``c_p`` is ``inf`` when it exceeds the float range;
    ``log_c_p`` is always finite.
    """

    p: float
    c_p: float
    log_c_p: float
    b_p: Optional[float]
    t_bp: Optional[float]
    iterations: int
    achieved_tolerance: float
    method: Method


def _check_p(p, lower=1.0, strict=True) -> float:
    try:
        p = float(p)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"p must be a real number, got {p!r}") from exc
    if math.isnan(p) or math.isinf(p):
        raise DomainError(f"p must be finite, got {p!r}")
    if (strict and p <= lower) or (not strict and p < lower):
        op = ">" if strict else ">="
        raise DomainError(f"p must be {op} {lower:g}, got {p!r}")
    return p


def _check_b(b, lo=0.0, hi=1.0, open_=False) -> float:
    try:
        b = float(b)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"b must be a real number, got {b!r}") from exc
    if math.isnan(b):
        raise DomainError("b must not be NaN")
    bad = not (lo < b < hi) if open_ else not (lo <= b <= hi)
    if bad:
        brackets = "()" if open_ else "[]"
        raise DomainError(f"b must lie in {brackets[0]}{lo:g}, {hi:g}{brackets[1]}, got {b!r}")
    return b


def _log_sum_pow(lb: float, l1b: float, s: float) -> float:
    """``ln(b^s + (1-b)^s)`` given ``lb = ln b`` and ``l1b = ln(1-b)``."""
    u, v = s * lb, s * l1b
    hi, lo = (u, v) if u >= v else (v, u)
    if hi == -math.inf:
        return -math.inf
    return hi + math.log1p(math.exp(lo - hi))


def log_R(p: float, b: float) -> float:
    """``ln R(p, b)`` with ``b`` already canonicalized to ``[0, 1/2]``."""
    r = p - 1.0
    lb = math.log(b) if b > 0 else -math.inf
    l1b = math.log1p(-b)
    return _log_sum_pow(lb, l1b, r) + r * _log_sum_pow(lb, l1b, 1.0 / r)


def eval_R(p: float, b: float) -> RPoint:
    """Evaluate ``R(p, b)`` for ``p > 1`` and ``b`` in ``[0, 1]``.

    ``b`` is replaced by ``min(b, 1 - b)`` first, which makes
    ``eval_R(p, b) == eval_R(p, 1 - b)`` bit for bit. The direct product is
    used when both factors are safely inside the float range; otherwise the
    value is assembled from logarithms.
    """
    p = _check_p(p)
    b = _check_b(b)
    b = min(b, 1.0 - b)
    r = p - 1.0
    ir = 1.0 / r
    # crude magnitude checks on each factor before forming it directly
    risky = r > 64.0 or ir > 64.0 or (b > 0 and (r * abs(math.log(b)) > 600.0))
    if not risky:
        f1 = b**r + (1.0 - b) ** r
        f2 = (b**ir + (1.0 - b) ** ir) ** r
        value = f1 * f2
        if 0.0 < value < math.inf:
            return RPoint(p, b, value, math.log(value))
    lv = log_R(p, b)
    value = math.exp(lv) if lv < _LOG_MAX else math.inf
    return RPoint(p, b, value, lv)


def _d1_ratio(r: float, x: float) -> float:
    """The subtracted ratio in ``D1 = r - ratio``, for ``r, x`` in ``(0, 1)``.

    ``x - x^(1/r)`` and ``x^r - x`` are formed with ``expm1`` so that the
    ratio stays accurate as ``x -> 1`` or ``r -> 1``.
    """
    lx = math.log(x)
    ir = 1.0 / r
    num = -math.expm1((ir - 1.0) * lx) * (1.0 + math.exp(r * lx))
    den = math.expm1((r - 1.0) * lx) * (1.0 + math.exp(ir * lx))
    return num / den


def _d1(r: float, x: float) -> float:
    return r - _d1_ratio(r, x)


def eval_D1_sign(p: float, b: float, resolution: float = SIGN_RESOLUTION) -> int:
    """Sign of ``d ln R(p, b) / db`` for ``p`` in ``(1, 2)``, ``b`` in ``(0, 1/2)``.

    Uses the equivalent expression ``D1(r, x)`` with ``r = p - 1`` and
    ``x = b / (1 - b)``. Values with ``|D1| <= resolution`` are reported as 0.
    Callers with ``p > 2`` should pass the dual exponent instead.
    """
    p = _check_p(p)
    if not p < 2.0:
        raise DomainError(f"eval_D1_sign needs p in (1, 2), got {p!r}")
    b = _check_b(b, 0.0, 0.5, open_=True)
    d = _d1(p - 1.0, b / (1.0 - b))
    if abs(d) <= resolution:
        return 0
    return 1 if d > 0 else -1


def _bisect_sign(sign_at, lo: float, hi: float, tol: float, max_iter: int):
    """Locate the ``+ -> -`` sign change of ``sign_at`` in ``[lo, hi]``.

    Returns ``(root, lo, hi, iterations)``.
    """
    it = 0
    while hi - lo > tol:
        if it >= max_iter:
            raise ConvergenceError(
                f"bisection did not reach width {tol:g} in {max_iter} iterations"
                f" (bracket [{lo!r}, {hi!r}])"
            )
        it += 1
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        s = sign_at(mid)
        if s > 0:
            lo = mid
        elif s < 0:
            hi = mid
        else:
            return mid, mid, mid, it
    return 0.5 * (lo + hi), lo, hi, it


def _lower_bracket(sign_at, start: float) -> float:
    lo = start
    while sign_at(lo) <= 0:
        lo *= 1e-3
        if lo < 1e-300:
            raise ConvergenceError("could not bracket the maximizer from below")
    return lo


def _solve_bp(p: float, tol: float, max_iter: int):
    ex = Exponent.of(p)
    # the D1 form needs r = p - 1 in (0, 1)
    r = ex.r if ex.regime is Regime.SUB_TWO else ex.q - 1.0

    def sign_at(b):
        return _d1(r, b / (1.0 - b))

    # b_p ~ r/2 as r -> 0, so start well below that
    lo = _lower_bracket(sign_at, min(0.25 * r, 0.25))
    return _bisect_sign(sign_at, lo, 0.5, tol, max_iter)


def find_bp(p: float, tol: float = DEFAULT_B_TOL, max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Unique maximizer ``b_p`` of ``R(p, .)`` on ``(0, 1/2)``, to within ``tol``.

    Raises
    ------
    DomainError
        For ``p <= 1``, ``p == 2`` (``R(2, .)`` is constant), or ``tol``
        outside ``(0, 1e-3)``.
    ConvergenceError
        If ``max_iter`` bisection steps do not suffice.
    """
    p = _check_p(p)
    if p == 2.0:
        raise DomainError("R(2, b) = 1 for all b: there is no unique maximizer at p = 2")
    if not 0.0 < tol < 1e-3:
        raise DomainError(f"tol must lie in (0, 1e-3), got {tol!r}")
    return _solve_bp(p, tol, max_iter)[0]


def _achieved(p: float, lo: float, hi: float, log_c: float) -> float:
    spread = abs(log_R(p, lo) - log_R(p, hi)) if lo != hi else 0.0
    return max(spread, TOL_FLOOR * max(1.0, abs(log_c)))


def compute_Cp(
    p: float,
    tol: float = DEFAULT_TOL,
    allow_p1: bool = False,
    max_iter: int = DEFAULT_MAX_ITER,
) -> OptimalConstant:
    """Best constant ``C_p`` with maximizer ``b_p`` and shift ``t_{b_p}``.

    For ``p < 2`` the constant is obtained from the dual exponent as
    ``C_q ** (p - 1)``, which avoids the exponent ``1/(p-1)`` blowing up as
    ``p -> 1``. ``p = 1`` is accepted only with ``allow_p1=True`` and returns
    the closed form ``C_1 = 2``.

    ``tol`` below ``TOL_FLOOR`` is rejected. ``b_p`` is always resolved to
    ``DEFAULT_B_TOL`` or better, since the extra bisection steps are cheap.
    ``achieved_tolerance`` bounds the relative error of ``c_p``; for huge
    ``p`` it grows with ``|log c_p|`` and may exceed ``tol``.
    """
    try:
        pf = float(p)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"p must be a real number, got {p!r}") from exc
    if pf == 1.0 and allow_p1:
        return OptimalConstant(1.0, 2.0, math.log(2.0), None, None, 0, 0.0, Method.CLOSED_FORM_P1)
    if pf < 1.0 and not math.isnan(pf):
        raise DomainError(f"the best constant C_p is infinite for p < 1 (got p={pf!r})")
    if pf == 1.0:
        raise DomainError("p = 1 needs allow_p1=True (C_1 = 2 is not attained)")
    ex = Exponent.of(pf)
    if not tol >= TOL_FLOOR:
        raise DomainError(f"tol must be at least {TOL_FLOOR:.2g} (double precision), got {tol!r}")
    if ex.regime is Regime.TWO:
        return OptimalConstant(2.0, 1.0, 0.0, None, None, 0, 0.0, Method.CLOSED_FORM_P2)

    b_tol = min(tol, DEFAULT_B_TOL)
    b, lo, hi, iters = _solve_bp(ex.p, b_tol, max_iter)
    if ex.regime is Regime.SUPER_TWO:
        log_c = log_R(ex.p, b)
        achieved = _achieved(ex.p, lo, hi, log_c)
        method = Method.SIGN_BISECTION
    else:
        log_cq = log_R(ex.q, b)
        log_c = ex.r * log_cq
        achieved = ex.r * _achieved(ex.q, lo, hi, log_cq)
        achieved = max(achieved, TOL_FLOOR * max(1.0, abs(log_c)))
        method = Method.DUAL_TRANSFER
    c = math.exp(log_c) if log_c < _LOG_MAX else math.inf
    return OptimalConstant(ex.p, c, log_c, b, eval_tb(ex.p, b), iters, achieved, method)


def eval_tb(p: float, b: float) -> float:
    """Shift ``t_b = b - b^s / (b^s + (1-b)^s)`` with ``s = 1/(p-1)``.

    The ratio is evaluated as a logistic function of ``s * ln((1-b)/b)``,
    which stays finite for tiny ``b`` and ``p`` close to 1.
    """
    p = _check_p(p)
    b = _check_b(b, 0.0, 1.0, open_=True)
    z = (math.log1p(-b) - math.log(b)) / (p - 1.0)
    if z >= 0:
        e = math.exp(-z)
        frac = e / (1.0 + e)
    else:
        frac = 1.0 / (1.0 + math.exp(z))
    return b - frac


def extremal_distribution(p: float, lam: float = 1.0, tol: float = DEFAULT_TOL) -> DiscreteDistribution:
    """Law of ``lam * (X_{1-b_p, b_p} - t_{b_p})``, for which equality holds.

    Atoms are ``lam * (b_p - t)`` with probability ``1 - b_p`` and
    ``lam * (b_p - 1 - t)`` with probability ``b_p``; ``lam = 0`` gives the
    point mass at 0.
    """
    p = _check_p(p)
    if p == 2.0:
        raise DomainError("at p = 2 equality holds for every zero-mean X; no unique extremal law")
    sol = compute_Cp(p, tol)
    base = TwoPointDistribution.zero_mean(1.0 - sol.b_p, sol.b_p)
    return base.affine(float(lam), sol.t_bp)


def log_asymptotic_Cp(p: float) -> float:
    p = _check_p(p)
    return p * math.log(2.0) - 0.5 * math.log(8.0 * math.e * p)


def asymptotic_Cp(p: float) -> float:
    """Large-``p`` equivalent ``2^p / sqrt(8 e p)`` of ``C_p`` (``inf`` on overflow)."""
    lv = log_asymptotic_Cp(p)
    return math.exp(lv) if lv < _LOG_MAX else math.inf


def _dlogR_db(p: float, b: float) -> float:
    """Analytic ``d ln R(p, b) / db`` in the native frame of ``p``."""
    r = p - 1.0
    ir = 1.0 / r
    lb, l1b = math.log(b), math.log1p(-b)

    def term(s):
        # s (b^(s-1) - (1-b)^(s-1)) / (b^s + (1-b)^s), scaled by the larger power
        u, v = s * lb, s * l1b
        m = max(u, v)
        num = math.exp(u - m) / b - math.exp(v - m) / (1.0 - b)
        den = math.exp(u - m) + math.exp(v - m)
        return s * num / den

    return term(r) + r * term(ir)


def _maximize_direct(p: float, tol: float = DEFAULT_B_TOL, max_iter: int = DEFAULT_MAX_ITER):
    """Maximize ``R(p, .)`` by bisection on the analytic derivative at ``p`` itself.

    Independent of the dual-frame ``D1`` route; used to cross-check it.
    Returns ``(b, log_R)``.
    """

    def sign_at(b):
        return _dlogR_db(p, b)

    r = p - 1.0
    lo = _lower_bracket(sign_at, 0.25 * min(r, 1.0 / r, 1.0))
    b = _bisect_sign(sign_at, lo, 0.5, tol, max_iter)[0]
    return b, log_R(p, b)


@dataclass(frozen=True)
class SymmetryReport:
    p: float
    q: float
    lhs: float
    rhs: float
    gap: float
    b_p: float
    b_q: float
    b_gap: float


def check_symmetry(p: float, tol: float = DEFAULT_B_TOL) -> SymmetryReport:
    """Compare ``C_p^(1/sqrt(p-1))`` with ``C_q^(1/sqrt(q-1))``.

    Each side is maximized on its own, directly at its exponent, with no
    dual transfer.
    """
    ex = Exponent.of(p)
    if ex.regime is Regime.TWO:
        raise DomainError("p = 2 is self-dual; nothing to compare")
    b_p, lc_p = _maximize_direct(ex.p, tol)
    b_q, lc_q = _maximize_direct(ex.q, tol)
    lhs = math.exp(lc_p / math.sqrt(ex.p - 1.0))
    rhs = math.exp(lc_q / math.sqrt(ex.q - 1.0))
    return SymmetryReport(ex.p, ex.q, lhs, rhs, abs(lhs - rhs), b_p, b_q, abs(b_p - b_q))
