"""Brute-force checks of the optimal constants.

Everything here avoids the bisection solver: moment ratios are summed
directly over atoms, ``C_p`` is approached by a lattice scan of the
two-point ratio, and the sign identity behind the unimodality of
``R(p, .)`` is checked with finite differences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .constants import _d1_ratio, _check_p, compute_Cp, eval_tb, extremal_distribution
from .distributions import DiscreteDistribution
from .errors import DegenerateInputError, DomainError

VIOLATION_TOL = 1e-9


def central_moment_ratio(d: DiscreteDistribution, p: float) -> float:
    """``E|X - EX|^p / E|X|^p`` summed exactly over the atoms of ``d``."""
    if not p > 0:
        raise DomainError(f"p must be positive, got {p!r}")
    scale = max(abs(x) for x in d.xs)
    if scale == 0:
        raise DegenerateInputError("E|X|^p = 0: the point mass at 0 has no ratio")
    # the ratio is scale-free; normalizing keeps |x|^p clear of under/overflow
    xs = [x / scale for x in d.xs]
    m = math.fsum(w * x for x, w in zip(xs, d.probs))
    num = math.fsum(w * abs(x - m) ** p for x, w in zip(xs, d.probs))
    return num / math.fsum(w * abs(x) ** p for x, w in zip(xs, d.probs))


def _two_point_moment(p, b, t):
    # E|X_{1-b,b} - t|^p: atom b w.p. 1-b, atom b-1 w.p. b
    return (1.0 - b) * abs(b - t) ** p + b * abs(b - 1.0 - t) ** p


def rho_p(p: float, b: float, t: float) -> float:
    """``E|X|^p / E|X - t|^p`` for the zero-mean law ``X`` on ``{b - 1, b}``."""
    p = _check_p(p)
    if not 0.0 < b < 1.0:
        raise DomainError(f"b must lie in (0, 1), got {b!r}")
    if not math.isfinite(t):
        raise DomainError("t must be finite")
    return _two_point_moment(p, b, 0.0) / _two_point_moment(p, b, t)


@dataclass(frozen=True)
class BruteForceResult:
    sup: float
    b: float
    t: float
    nb: int
    nt: int


def brute_force_Cp(p: float, nb: int = 2000, nt: int = 2000) -> BruteForceResult:
    """Maximum of ``rho_p`` over ``b`` in ``(0, 1/2]`` and ``t`` in ``[b - 1, b]``.

    Every lattice value is attained by a two-point law, so ``sup`` is a lower
    bound on ``C_p`` that tightens as the lattice is refined.
    """
    p = _check_p(p)
    if nb < 100 or nt < 100:
        raise DomainError("nb and nt must be at least 100")
    bs = 0.5 * np.arange(1, nb + 1, dtype=np.float64) / nb
    ss = np.linspace(-1.0, 0.0, nt)
    sup, i, j = kernels.ratio_lattice_max(p, bs, ss)
    b = float(bs[i])
    return BruteForceResult(float(sup), b, b + float(ss[j]), nb, nt)


def check_tb_minimizer(p: float, b: float, nt: int = 100_000) -> bool:
    """Check on a grid that ``t -> E|X_{1-b,b} - t|^p`` is minimized at ``t_b``.

    True iff the grid minimizer over ``[b - 1, b]`` lies within one grid step
    of :func:`eval_tb`, the function decreases on sampled ``t <= b - 1`` and
    increases on sampled ``t >= b``.
    """
    p = _check_p(p)
    if nt < 1000:
        raise DomainError("nt must be at least 1000")
    ts = np.linspace(b - 1.0, b, nt)
    g = (1.0 - b) * np.abs(b - ts) ** p + b * np.abs(b - 1.0 - ts) ** p
    t_grid = ts[int(np.argmin(g))]
    step = 1.0 / (nt - 1)
    near = abs(t_grid - eval_tb(p, b)) <= step * (1.0 + 1e-9)
    left = b - 1.0 - 0.05 * np.arange(40, -1, -1)
    right = b + 0.05 * np.arange(41)
    g_left = [_two_point_moment(p, b, t) for t in left]
    g_right = [_two_point_moment(p, b, t) for t in right]
    decreasing = all(u > v for u, v in zip(g_left, g_left[1:]))
    increasing = all(u < v for u, v in zip(g_right, g_right[1:]))
    return bool(near and decreasing and increasing)


@dataclass(frozen=True)
class IdentityReport:
    lhs: float
    rhs: float
    gap: float
    abs_gap: float
    log_scale: bool


def _signed_logsumexp(terms):
    """``ln|sum|`` and sign of ``sum c * exp(u)`` for ``(c, u)`` pairs."""
    m = max(u for c, u in terms if c != 0)
    s = math.fsum(c * math.exp(u - m) for c, u in terms)
    if s == 0:
        return -math.inf, 0
    return m + math.log(abs(s)), (1 if s > 0 else -1)


def _sinh_terms(coef, u):
    return [(0.5 * coef, u), (-0.5 * coef, -u)]


def check_d2_identity(r: float, z: float, rel_step: float = 1e-6) -> IdentityReport:
    """Compare both sides of the identity used to show ``D1`` is decreasing.

    With ``x = exp(-r z)``, the left side is
    ``r x^3 (1 + x^(1/r))^2 (x^(r-1) - 1)^2 D1'(x) e^((1+r+r^2) z) / 2`` with
    ``D1'`` from a central difference of step ``rel_step * x``; the right side
    is ``D21(z) + (1 - r) D22(z)`` in closed form. Accuracy is limited by
    the finite difference. For ``(1+r+r^2) z > 700`` both sides are formed
    from logarithms, and ``lhs``/``rhs`` may then be infinite.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r!r}")
    if not (z > 0 and math.isfinite(z)):
        raise DomainError(f"z must be positive, got {z!r}")
    if r * z > 700.0:
        raise DomainError("x = exp(-r z) underflows; reduce z")
    lx = -r * z
    x = math.exp(lx)
    h = rel_step * x
    # D1 = r - ratio, and r drops out of the derivative
    d1_prime = -(_d1_ratio(r, x + h) - _d1_ratio(r, x - h)) / (2.0 * h)
    growth = (1.0 + r + r * r) * z

    c = 1.0 - r
    terms = (
        _sinh_terms(r * r, c * z)
        + _sinh_terms(1.0, r * c * z)
        + _sinh_terms(-r, (1.0 - r * r) * z)
        # (1 - r) * (h(z) - h(rz)), h(u) = sh(ru) - r sh(u)
        + _sinh_terms(c, r * z)
        + _sinh_terms(-c * r, z)
        + _sinh_terms(-c, r * r * z)
        + _sinh_terms(c * r, r * z)
    )

    if growth <= 700.0:
        sh = math.sinh
        d21 = r * r * sh(c * z) + sh(r * c * z) - r * sh((1.0 - r * r) * z)

        def hfun(u):
            return sh(r * u) - r * sh(u)

        rhs = d21 + c * (hfun(z) - hfun(r * z))
        d2 = r * x**3 * (1.0 + x ** (1.0 / r)) ** 2 * math.expm1((r - 1.0) * lx) ** 2 * d1_prime
        lhs = d2 * math.exp(growth) / 2.0
        abs_gap = abs(lhs - rhs)
        return IdentityReport(lhs, rhs, abs_gap / (abs(rhs) + 1e-300), abs_gap, False)

    log_rhs, sign_rhs = _signed_logsumexp(terms)
    if d1_prime == 0:
        log_lhs, sign_lhs = -math.inf, 0
    else:
        log_lhs = (
            math.log(r) + 3.0 * lx + 2.0 * math.log1p(math.exp(lx / r))
            + 2.0 * math.log(abs(math.expm1((r - 1.0) * lx)))
            + math.log(abs(d1_prime)) + growth - math.log(2.0)
        )
        sign_lhs = 1 if d1_prime > 0 else -1
    if sign_lhs != sign_rhs:
        gap = math.inf
    else:
        gap = abs(math.expm1(log_lhs - log_rhs))

    def _val(sign, lv):
        return sign * (math.exp(lv) if lv < 709.0 else math.inf)

    lhs, rhs = _val(sign_lhs, log_lhs), _val(sign_rhs, log_rhs)
    abs_gap = abs(lhs - rhs) if math.isfinite(lhs) and math.isfinite(rhs) else math.inf
    return IdentityReport(lhs, rhs, gap, abs_gap, True)


@dataclass(frozen=True)
class SweepResult:
    p: float
    c_p: float
    trials: int
    violations: int
    max_ratio: float
    worst: DiscreteDistribution


def _random_atoms(rng, max_atoms):
    k = int(rng.integers(1, max_atoms + 1))
    scale = 10.0 ** rng.uniform(-3.0, 3.0)
    xs = rng.standard_t(3.0, size=k) * scale
    ws = rng.dirichlet(np.ones(k))
    return xs, ws


def random_distribution_sweep(
    p: float,
    trials: int = 10_000,
    max_atoms: int = 8,
    seed: int = 0,
    include_extremal: bool = False,
) -> SweepResult:
    """Check ``E|X - EX|^p <= C_p E|X|^p`` on random finite distributions.

    Trial ``i`` draws from a generator seeded by ``(seed, i)``: an atom count
    uniform on ``1..max_atoms``, Student-t(3) atoms times a log-uniform scale,
    and Dirichlet(1, ..., 1) weights. Violations (ratio above
    ``C_p + 1e-9``) are counted, not raised.
    """
    p = _check_p(p)
    if trials < 1:
        raise DomainError("trials must be at least 1")
    if max_atoms < 1:
        raise DomainError("max_atoms must be at least 1")
    c_p = compute_Cp(p).c_p
    xs = np.zeros((trials, max_atoms))
    ws = np.zeros((trials, max_atoms))
    counts = np.zeros(trials, dtype=np.int64)
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        x, w = _random_atoms(rng, max_atoms)
        xs[i, : x.size] = x
        ws[i, : w.size] = w
        counts[i] = x.size
    ratios = kernels.central_moment_ratios(xs, ws, counts, p)

    def dist(i):
        k = counts[i]
        w = ws[i, :k]
        return DiscreteDistribution(tuple(xs[i, :k]), tuple(w / math.fsum(w)))

    violations = 0
    for i in np.flatnonzero(ratios > c_p + VIOLATION_TOL):
        # confirm with compensated sums before reporting
        if central_moment_ratio(dist(i), p) > c_p + VIOLATION_TOL:
            violations += 1
    i_max = int(np.argmax(ratios))
    worst = dist(i_max)
    max_ratio = central_moment_ratio(worst, p)
    if include_extremal and p != 2.0:
        ext = extremal_distribution(p, 1.0)
        r_ext = central_moment_ratio(ext, p)
        trials += 1
        if r_ext > c_p + VIOLATION_TOL:
            violations += 1
        if r_ext > max_ratio:
            max_ratio, worst = r_ext, ext
    return SweepResult(p, c_p, trials, violations, max_ratio, worst)


@dataclass(frozen=True)
class NaiveComparison:
    p: float
    naive: float
    sharp: float
    improvement: float


def naive_factor_comparison(p: float) -> NaiveComparison:
    """Compare the crude factor ``2^p`` with the sharp ``C_p``."""
    p = _check_p(p, strict=False)
    sol = compute_Cp(p, allow_p1=True)
    log_impr = p * math.log(2.0) - sol.log_c_p
    naive = 2.0**p if p < 1024 else math.inf
    return NaiveComparison(p, naive, sol.c_p, math.exp(log_impr) if log_impr < 709 else math.inf)
