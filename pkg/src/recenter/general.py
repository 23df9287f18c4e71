"""Lower bounds on the general re-centering constant ``c_f``.

``c_f`` is the supremum over ``a, b > 0`` and real ``t`` of

    (a f(b) + b f(-a)) / (a f(b - t) + b f(-a - t)),

which may be unattained or infinite. ``estimate_cf`` searches a lattice with
local refinement and reports the best ratio found, which is always a valid
lower bound on ``c_f``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import DomainError

_CANARY = np.concatenate([-np.geomspace(1e-6, 1e6, 25), np.geomspace(1e-6, 1e6, 25)])


@dataclass(frozen=True, eq=False)
class MomentFunction:
    """A nonnegative ``f`` on the real line vanishing only at 0.

    Build instances with :meth:`power`, :meth:`absolute`, :meth:`huber`,
    :meth:`tabulated` or :meth:`load_table`. Calls are vectorized.
    """

    family: str
    params: dict = field(default_factory=dict)
    _fn: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        with np.errstate(all="ignore"):
            at0 = float(self(np.array([0.0]))[0])
            vals = self(_CANARY)
        if at0 != 0.0:
            raise DomainError(f"{self.family}: f(0) = {at0!r}, expected 0")
        if not np.all(np.isfinite(vals)) or not np.all(vals > 0):
            raise DomainError(f"{self.family}: f must be finite and positive away from 0")

    def __call__(self, x):
        return self._fn(np.asarray(x, dtype=np.float64))

    @property
    def homogeneous(self) -> bool:
        """True for ``|x|^p`` families, whose ratio is invariant under scaling."""
        return self.family in ("power", "absolute")

    @property
    def power_exponent(self) -> Optional[float]:
        if self.family == "power":
            return self.params["p"]
        if self.family == "absolute":
            return 1.0
        return None

    @property
    def label(self) -> str:
        if self.family == "power":
            return f"power:{self.params['p']:g}"
        if self.family == "huber":
            return f"huber:{self.params['delta']:g}"
        if self.family == "tabulated":
            return f"table:{self.params.get('source', '<memory>')}"
        return "abs"

    @classmethod
    def power(cls, p: float) -> "MomentFunction":
        p = float(p)
        if not (p > 0 and math.isfinite(p)):
            raise DomainError(f"power family needs p > 0, got {p!r}")
        return cls("power", {"p": p}, lambda x: np.abs(x) ** p)

    @classmethod
    def absolute(cls) -> "MomentFunction":
        return cls("absolute", {}, np.abs)

    @classmethod
    def huber(cls, delta: float) -> "MomentFunction":
        delta = float(delta)
        if not (delta > 0 and math.isfinite(delta)):
            raise DomainError(f"huber family needs delta > 0, got {delta!r}")

        def fn(x):
            ax = np.abs(x)
            return np.where(ax <= delta, 0.5 * ax * ax, delta * (ax - 0.5 * delta))

        return cls("huber", {"delta": delta}, fn)

    @classmethod
    def tabulated(cls, xs, fs, exponent: float, source: str = "<memory>") -> "MomentFunction":
        """Piecewise-linear ``f`` through the knots ``(xs, fs)``.

        Outside the knot range ``f`` continues as a power law with the given
        exponent, anchored at the end knot. Knots confined to ``x >= 0``
        describe an even function.
        """
        xs = np.asarray(xs, dtype=np.float64)
        fs = np.asarray(fs, dtype=np.float64)
        if xs.ndim != 1 or xs.shape != fs.shape or xs.size < 2:
            raise DomainError("need at least two (x, f(x)) knots")
        if not np.all(np.diff(xs) > 0):
            raise DomainError("knot x values must be strictly increasing")
        if not (np.all(np.isfinite(fs)) and np.all(fs >= 0)):
            raise DomainError("knot f values must be finite and nonnegative")
        if not xs[-1] > 0:
            raise DomainError("knots must extend to some x > 0")
        exponent = float(exponent)
        if not exponent > 0:
            raise DomainError("extrapolation exponent must be positive")
        even = xs[0] >= 0
        x_lo, x_hi, f_lo, f_hi = xs[0], xs[-1], fs[0], fs[-1]

        def fn(x):
            x = np.abs(x) if even else x
            out = np.interp(x, xs, fs)
            hi = x > x_hi
            out = np.where(hi, f_hi * (np.abs(x) / x_hi) ** exponent, out)
            if x_lo != 0:
                # below the first knot; for even tables this covers (0, x_lo)
                lo = x < x_lo
                out = np.where(lo, f_lo * (np.abs(x) / abs(x_lo)) ** exponent, out)
            return out

        params = {"exponent": exponent, "source": source, "knots": int(xs.size)}
        return cls("tabulated", params, fn)

    @classmethod
    def load_table(cls, path: str | Path, exponent: float) -> "MomentFunction":
        """Read a two-column ``x f(x)`` text file.

        Columns are split on spaces or commas, ``#`` starts a comment, and
        one non-numeric header line is skipped.
        """
        rows = []
        header_seen = False
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].replace(",", " ").strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise DomainError(f"{path}:{lineno}: expected two columns")
                try:
                    rows.append((float(parts[0]), float(parts[1])))
                except ValueError as exc:
                    if not rows and not header_seen:
                        header_seen = True  # e.g. "x,f"
                        continue
                    raise DomainError(f"{path}:{lineno}: {exc}") from exc
        if not rows:
            raise DomainError(f"{path}: no data rows")
        xs, fs = zip(*rows)
        return cls.tabulated(xs, fs, exponent, source=str(path))


def cf_ratio(f: MomentFunction, a: float, b: float, t: float) -> float:
    """``(a f(b) + b f(-a)) / (a f(b-t) + b f(-a-t))`` for ``a, b > 0``."""
    if not (a > 0 and b > 0):
        raise DomainError(f"a and b must be positive, got a={a!r}, b={b!r}")
    fb, fa, fbt, fat = f(np.array([b, -a, b - t, -a - t], dtype=np.float64))
    return float((a * fb + b * fa) / (a * fbt + b * fat))


@dataclass(frozen=True)
class CfEstimate:
    """Best ratio found by :func:`estimate_cf`.

    ``lower_bound`` is a lower bound on ``c_f``, never a claim about the
    supremum itself. ``converged`` is False when the running maximum kept
    growing at the edge of the search domain, which suggests the supremum
    is approached only in a limit (or is infinite).
    """

    lower_bound: float
    argmax: tuple[float, float, float]
    grid_spec: dict
    converged: bool
    history: tuple[float, ...]


def _next_box(center, spacing, lo_lim, hi_lim, n, open_lo=False, open_hi=False):
    """Box of two spacings either side of ``center``, clipped to the limits.

    At an open limit the box edge is pulled a factor ``n`` closer to the
    limit instead, so repeated refinement approaches it geometrically.
    Returns ``(lo, hi, touches_lo, touches_hi)``.
    """
    lo, hi = center - 2.0 * spacing, center + 2.0 * spacing
    touch_lo = touch_hi = False
    if lo <= lo_lim:
        lo = lo_lim + (center - lo_lim) / n if open_lo else lo_lim
        touch_lo = True
    if hi >= hi_lim:
        hi = hi_lim - (hi_lim - center) / n if open_hi else hi_lim
        touch_hi = True
    return lo, hi, touch_lo, touch_hi


class _Running:
    """Running maximum over refinement levels, on the scalar ratio path."""

    def __init__(self, f):
        self.f = f
        self.best = -math.inf
        self.arg = None
        self.history = []
        self.edge_growth = False
        self.on_edge = False

    def offer(self, arg, on_edge, level):
        val = cf_ratio(self.f, *arg)
        grew = False
        if val > self.best:
            grew = self.best > 0 and val > self.best * (1.0 + 1e-12)
            self.best, self.arg, self.on_edge = val, arg, on_edge
        self.history.append(self.best)
        self.edge_growth = grew and on_edge and level > 0


def _search_power(f, n, levels):
    """2-D search for ``|x|^p`` with ``a = 1 - b`` and ``t = b + s``, ``s`` in [-1, 0]."""
    p = f.power_exponent
    run = _Running(f)
    b_box = (1.0 / (n + 1), n / (n + 1.0), True, True)
    s_box = (-1.0, 0.0, True, True)
    for level in range(levels + 1):
        bs = np.linspace(b_box[0], b_box[1], n)
        ss = np.linspace(s_box[0], s_box[1], n)
        _, i, j = kernels.ratio_lattice_max(p, bs, ss)
        b, s = float(bs[i]), float(ss[j])
        on_edge = (i == 0 and b_box[2]) or (i == n - 1 and b_box[3])
        run.offer((1.0 - b, b, b + s), bool(on_edge), level)
        b_box = _next_box(b, bs[1] - bs[0], 0.0, 1.0, n, open_lo=True, open_hi=True)
        s_box = _next_box(s, ss[1] - ss[0], -1.0, 0.0, n)
    spec = {
        "mode": "homogeneous-2d",
        "normalization": "a + b = 1",
        "t_range": "[b - 1, b]",
        "points_per_axis": n,
        "refine_levels": levels,
    }
    return run, spec


def _ratio_grid(f, a, b, t):
    A, B, T = np.meshgrid(a, b, t, indexing="ij")
    with np.errstate(divide="ignore", invalid="ignore"):
        return (A * f(B) + B * f(-A)) / (A * f(B - T) + B * f(-A - T))


def _search_general(f, n, levels, cap):
    run = _Running(f)
    a_box = b_box = (cap / n, cap, True, True)
    t_box = (-cap, cap, True, True)
    for level in range(levels + 1):
        axes = [np.linspace(box[0], box[1], n) for box in (a_box, b_box, t_box)]
        grid = _ratio_grid(f, *axes)
        grid = np.where(np.isfinite(grid), grid, -np.inf)
        idx = np.unravel_index(int(np.argmax(grid)), grid.shape)
        a, b, t = (float(ax[k]) for ax, k in zip(axes, idx))
        on_edge = any(
            (k == 0 and box[2]) or (k == n - 1 and box[3])
            for k, box in zip(idx, (a_box, b_box, t_box))
        )
        run.offer((a, b, t), on_edge, level)
        a_box = _next_box(a, axes[0][1] - axes[0][0], 0.0, cap, n, open_lo=True)
        b_box = _next_box(b, axes[1][1] - axes[1][0], 0.0, cap, n, open_lo=True)
        t_box = _next_box(t, axes[2][1] - axes[2][0], -cap, cap, n)
    spec = {
        "mode": "general-3d",
        "a_range": f"(0, {cap:g}]",
        "b_range": f"(0, {cap:g}]",
        "t_range": f"[{-cap:g}, {cap:g}]",
        "points_per_axis": n,
        "refine_levels": levels,
    }
    return run, spec


def estimate_cf(
    f: MomentFunction,
    coarse_n: int = 64,
    refine_levels: int = 6,
    cap: float = 10.0,
) -> CfEstimate:
    """Lattice search with local refinement for the supremum defining ``c_f``.

    Power-type families are scale invariant, so the search is over ``b`` in
    ``(0, 1)`` with ``a = 1 - b`` and ``t`` in ``[b - 1, b]``. Other families
    are searched on ``a, b`` in ``(0, cap]`` and ``t`` in ``[-cap, cap]``.
    Each refinement level re-grids a box of four lattice spacings around the
    running maximizer; boxes touching ``a = 0`` or ``b = 0`` are pulled
    towards the edge geometrically, so suprema attained only in such limits
    are still approached.
    """
    if coarse_n < 8:
        raise DomainError("coarse_n must be at least 8")
    if refine_levels < 0:
        raise DomainError("refine_levels must be nonnegative")
    if f.homogeneous:
        run, spec = _search_power(f, coarse_n, refine_levels)
    else:
        if not (cap > 0 and math.isfinite(cap)):
            raise DomainError("cap must be positive and finite")
        run, spec = _search_general(f, coarse_n, refine_levels, float(cap))
    spec["family"] = f.label
    spec["argmax_on_domain_edge"] = bool(run.on_edge)
    converged = not run.edge_growth and math.isfinite(run.best)
    return CfEstimate(run.best, run.arg, spec, converged, tuple(run.history))
