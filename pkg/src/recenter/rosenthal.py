"""Rosenthal-type bounds on central moments of separately Lipschitz functions.

For independent ``X_1, ..., X_n`` and ``Y = g(X_1, ..., X_n)`` with ``g``
separately Lipschitz with moduli ``rho_i``,

    E|Y - EY|^p <= C_p c1 sum_i E rho_i(X_i, x_i)^p
                   + c2 (sum_i E rho_i(X_i, y_i)^2)^(p/2)

for any centers ``x_i, y_i``, whenever the martingale inequality with
constants ``c1, c2`` holds. The same bound holds under the weaker,
averaged Lipschitz condition, so no extra code is needed for it.
"""
from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .constants import compute_Cp
from .errors import DomainError


@dataclass(frozen=True)
class CoordinateSummary:
    """Per-coordinate moments ``E rho_i(X_i, x_i)^p`` and ``E rho_i(X_i, y_i)^2``."""

    rho_p_moment: float
    rho_2_moment: float

    def __post_init__(self):
        for name in ("rho_p_moment", "rho_2_moment"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v >= 0):
                raise DomainError(f"{name} must be finite and nonnegative, got {v!r}")
            object.__setattr__(self, name, v)


def load_coordinates(path: str | Path) -> list[CoordinateSummary]:
    """Read a JSON array of ``{"rho_p_moment": ..., "rho_2_moment": ...}`` objects."""
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, list):
        raise DomainError("coordinate file must hold a JSON array")
    try:
        return [CoordinateSummary(e["rho_p_moment"], e["rho_2_moment"]) for e in doc]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"bad coordinate entry: {exc}") from exc


_BUILTIN = {
    2.0: (1.0, 0.0, "trivial martingale bound at p = 2"),
    3.0: (1.0, 3.0, "Hilbert-space martingale Rosenthal bound at p = 3"),
}


@dataclass(frozen=True)
class MartingaleConstants:
    """Constants ``c1, c2`` in the martingale Rosenthal inequality at order ``p``.

    Only ``p = 2`` and ``p = 3`` have built-in values; any other set must
    name its provenance in ``source``.
    """

    p: float
    c1: float
    c2: float
    source: str

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p >= 2):
            raise DomainError(f"martingale constants need p >= 2, got {self.p!r}")
        if not self.c1 > 0 or not self.c2 >= 0:
            raise DomainError("need c1 > 0 and c2 >= 0")
        if not self.source.strip():
            raise DomainError("user-supplied constants need a provenance note in 'source'")

    @classmethod
    def builtin(cls, p: float) -> "MartingaleConstants":
        p = float(p)
        if p not in _BUILTIN:
            raise DomainError(
                f"no built-in martingale constants at p = {p:g}; supply c1, c2 with a source"
            )
        c1, c2, src = _BUILTIN[p]
        return cls(p, c1, c2, src)


def concentration_bound(mc: MartingaleConstants, coords: Sequence[CoordinateSummary]) -> float:
    """``C_p c1 sum rho_p_moment + c2 (sum rho_2_moment)^(p/2)``; 0 for no coordinates."""
    if mc.p < 2:
        raise DomainError("the bound needs p >= 2")
    if not coords:
        return 0.0
    c_p = compute_Cp(mc.p).c_p
    s_p = math.fsum(c.rho_p_moment for c in coords)
    s_2 = math.fsum(c.rho_2_moment for c in coords)
    return c_p * mc.c1 * s_p + mc.c2 * s_2 ** (mc.p / 2.0)


# --- Monte Carlo check for Y = ||X_1 + ... + X_n|| ------------------------------

GENERATORS = ("normal", "uniform", "two_point", "zero")
TWO_POINT_B = 0.2
_MAX_ENUM_DIM = 16


def _draw(kind, rng, shape):
    if kind == "normal":
        return rng.standard_normal(shape)
    if kind == "uniform":
        return rng.uniform(-1.0, 1.0, shape)
    if kind == "two_point":
        # zero-mean law on {b - 1, b}, P(b) = 1 - b
        return np.where(rng.random(shape) < TWO_POINT_B, TWO_POINT_B - 1.0, TWO_POINT_B)
    if kind == "zero":
        return np.zeros(shape)
    raise DomainError(f"unknown generator {kind!r}; choose from {GENERATORS}")


_VARIANCE = {"normal": 1.0, "uniform": 1.0 / 3.0, "two_point": TWO_POINT_B * (1 - TWO_POINT_B), "zero": 0.0}


def _analytic_second(kind, y):
    """``E||X - y||^2`` for a coordinate law with mean 0."""
    return y.size * _VARIANCE[kind] + float(np.dot(y, y))


def _analytic_pth(kind, p, x):
    """``E||X - x||^p`` in closed form when available, else None."""
    d = x.size
    if p == 2.0:
        return _analytic_second(kind, x)
    if kind == "zero":
        return float(np.linalg.norm(x)) ** p
    if kind == "normal" and not np.any(x):
        return math.exp(0.5 * p * math.log(2.0) + math.lgamma(0.5 * (d + p)) - math.lgamma(0.5 * d))
    if kind == "uniform" and d == 1 and abs(x[0]) <= 1.0:
        u = float(x[0])
        return ((1.0 - u) ** (p + 1) + (1.0 + u) ** (p + 1)) / (2.0 * (p + 1))
    if kind == "two_point" and d <= _MAX_ENUM_DIM:
        lo, hi = TWO_POINT_B - 1.0, TWO_POINT_B
        total = []
        for pattern in itertools.product((0, 1), repeat=d):
            k = sum(pattern)
            v = np.where(np.array(pattern, dtype=bool), lo, hi)
            w = TWO_POINT_B**k * (1.0 - TWO_POINT_B) ** (d - k)
            total.append(w * float(np.linalg.norm(v - x)) ** p)
        return math.fsum(total)
    return None


@dataclass(frozen=True)
class SimulationResult:
    """Empirical ``E|Y - EY|^p`` against the Rosenthal-type bound.

    ``se`` is the Monte Carlo standard error of ``empirical``; the bound is
    sound if ``slack >= -3 * se``. ``ratio`` is bound / empirical.
    """

    n: int
    dim: int
    p: float
    generator: str
    samples: int
    seed: int
    empirical_central_p_moment: float
    se: float
    bound: float
    slack: float
    ratio: float
    moments_analytic: bool
    coords: tuple[CoordinateSummary, ...]


def _centers(c, n, dim, name):
    if c is None:
        return np.zeros((n, dim))
    arr = np.asarray(c, dtype=np.float64)
    if arr.shape != (n, dim):
        raise DomainError(f"{name} must have shape ({n}, {dim}), got {arr.shape}")
    return arr


def simulate_norm_of_sum(
    n: int,
    dim: int,
    p: float,
    generator: str = "normal",
    x_centers=None,
    y_centers=None,
    samples: int = 100_000,
    seed: int = 0,
    constants: Optional[MartingaleConstants] = None,
    batch_size: int = 10_000,
) -> SimulationResult:
    """Simulate ``Y = ||X_1 + ... + X_n||`` in Euclidean ``R^dim`` and compare.

    Coordinates of every ``X_i`` are i.i.d. from ``generator``. The bound uses
    ``rho_i(u, v) = ||u - v||`` with centers ``x_centers`` and ``y_centers``
    (arrays of shape ``(n, dim)``, zeros by default). Per-coordinate moments
    are exact where a closed form is known, otherwise estimated from the
    same sample. ``EY`` is estimated from the same sample too, which biases
    the central moment by ``O(1/samples)``.
    """
    if n < 1 or dim < 1:
        raise DomainError("n and dim must be positive")
    if samples < 1000:
        raise DomainError("samples must be at least 1000")
    if generator not in GENERATORS:
        raise DomainError(f"unknown generator {generator!r}; choose from {GENERATORS}")
    p = float(p)
    mc = constants if constants is not None else MartingaleConstants.builtin(p)
    if mc.p != p:
        raise DomainError(f"constants are for p = {mc.p:g}, simulation asks p = {p:g}")
    xc = _centers(x_centers, n, dim, "x_centers")
    yc = _centers(y_centers, n, dim, "y_centers")

    pth = [_analytic_pth(generator, p, xc[i]) for i in range(n)]
    second = [_analytic_second(generator, yc[i]) for i in range(n)]
    need_sample = [v is None for v in pth]
    analytic = not any(need_sample)

    ys = np.empty(samples)
    acc_pth = np.zeros(n)
    nbatches = -(-samples // batch_size)
    children = np.random.SeedSequence(seed).spawn(nbatches)
    for k, child in enumerate(children):
        rng = np.random.default_rng(child)
        start = k * batch_size
        m = min(batch_size, samples - start)
        xs = _draw(generator, rng, (m, n, dim))
        ys[start:start + m] = np.linalg.norm(xs.sum(axis=1), axis=1)
        if not analytic:
            acc_pth += (np.linalg.norm(xs - xc[None], axis=2) ** p).sum(axis=0)
    for i in range(n):
        if need_sample[i]:
            pth[i] = float(acc_pth[i] / samples)

    mean_y = math.fsum(ys) / samples
    dev = np.abs(ys - mean_y) ** p
    empirical = math.fsum(dev) / samples
    se = float(np.std(dev, ddof=1) / math.sqrt(samples))
    if float(np.var(ys)) == 0.0:
        warnings.warn("Y has zero sample variance; the simulation is degenerate", RuntimeWarning)

    coords = tuple(CoordinateSummary(a, b) for a, b in zip(pth, second))
    bound = concentration_bound(mc, coords)
    ratio = bound / empirical if empirical > 0 else math.inf
    return SimulationResult(
        n, dim, p, generator, samples, seed, empirical, se, bound,
        bound - empirical, ratio, analytic, coords,
    )


def load_simulation_config(path: str | Path) -> dict:
    """Read a JSON simulator config.

    Fields: ``n``, ``dim``, ``p``, ``generator``, ``samples``, ``seed`` and an
    optional ``centers`` object with ``x`` and ``y`` arrays of shape
    ``(n, dim)``.
    """
    with open(path) as fh:
        doc = json.load(fh)
    missing = {"n", "dim", "p"} - set(doc)
    if missing:
        raise DomainError(f"simulation config lacks {sorted(missing)}")
    centers = doc.get("centers") or {}
    return {
        "n": int(doc["n"]),
        "dim": int(doc["dim"]),
        "p": float(doc["p"]),
        "generator": doc.get("generator", "normal"),
        "x_centers": centers.get("x"),
        "y_centers": centers.get("y"),
        "samples": int(doc.get("samples", 100_000)),
        "seed": int(doc.get("seed", 0)),
    }
