"""Finite discrete distributions used by the oracles and extremal laws."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import DomainError

PROB_SUM_TOL = 1e-12
LOAD_PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class DiscreteDistribution:
    """A distribution with finitely many atoms.

    Parameters
    ----------
    xs : tuple of float
        Distinct atom locations.
    probs : tuple of float
        Strictly positive probabilities summing to 1 (within ``1e-12``).
    """

    xs: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        probs = tuple(float(w) for w in self.probs)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "probs", probs)
        if not xs:
            raise DomainError("a distribution needs at least one atom")
        if len(xs) != len(probs):
            raise DomainError("xs and probs differ in length")
        if not all(math.isfinite(x) for x in xs):
            raise DomainError("atoms must be finite")
        if not all(w > 0 and math.isfinite(w) for w in probs):
            raise DomainError("probabilities must be positive and finite")
        if len(set(xs)) != len(xs):
            raise DomainError("atoms must be distinct")
        total = math.fsum(probs)
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise DomainError(f"probabilities sum to {total!r}, not 1")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "DiscreteDistribution":
        pairs = list(pairs)
        return cls(tuple(x for x, _ in pairs), tuple(w for _, w in pairs))

    @classmethod
    def point_mass(cls, x: float) -> "DiscreteDistribution":
        return cls((x,), (1.0,))

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.xs, self.probs))

    def __len__(self):
        return len(self.xs)

    def __neg__(self) -> "DiscreteDistribution":
        return DiscreteDistribution(tuple(-x for x in self.xs), self.probs)

    def scale(self, lam: float) -> "DiscreteDistribution":
        if lam == 0:
            return DiscreteDistribution.point_mass(0.0)
        return DiscreteDistribution(tuple(lam * x for x in self.xs), self.probs)

    def shift(self, c: float) -> "DiscreteDistribution":
        return DiscreteDistribution(tuple(x + c for x in self.xs), self.probs)

    def mean(self) -> float:
        return math.fsum(w * x for x, w in zip(self.xs, self.probs))

    def abs_moment(self, p: float, center: float = 0.0) -> float:
        """``E|X - center|^p`` by compensated summation."""
        return math.fsum(w * abs(x - center) ** p for x, w in zip(self.xs, self.probs))

    def to_dict(self) -> dict:
        return {"atoms": [{"x": x, "prob": w} for x, w in zip(self.xs, self.probs)]}

    @classmethod
    def from_dict(cls, doc: dict) -> "DiscreteDistribution":
        """Build from ``{"atoms": [{"x": ..., "prob": ...}, ...]}``.

        Probabilities are accepted if they sum to 1 within ``1e-9`` and are
        then renormalized.
        """
        if not isinstance(doc, dict) or not isinstance(doc.get("atoms"), list):
            raise DomainError("distribution document needs an 'atoms' array")
        xs, probs = [], []
        for entry in doc["atoms"]:
            try:
                xs.append(float(entry["x"]))
                probs.append(float(entry["prob"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise DomainError(f"bad atom entry {entry!r}") from exc
        total = math.fsum(probs)
        if not abs(total - 1.0) <= LOAD_PROB_SUM_TOL:
            raise DomainError(f"probabilities sum to {total!r}, not 1 +- {LOAD_PROB_SUM_TOL}")
        return cls(tuple(xs), tuple(w / total for w in probs))

    @classmethod
    def load(cls, path: str | Path) -> "DiscreteDistribution":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)


@dataclass(frozen=True)
class TwoPointDistribution:
    """Law taking ``atom_neg`` with prob ``1 - prob_pos`` and ``atom_pos`` otherwise.

    ``zero_mean(a, b)`` builds the zero-mean law with values ``-a`` and ``b``,
    for which ``P(X = b) = a / (a + b)``.
    """

    atom_neg: float
    atom_pos: float
    prob_pos: float

    def __post_init__(self):
        if not 0.0 < self.prob_pos < 1.0:
            raise DomainError("prob_pos must lie in (0, 1)")
        if not self.atom_neg < self.atom_pos:
            raise DomainError("atom_neg must be below atom_pos")

    @classmethod
    def zero_mean(cls, a: float, b: float) -> "TwoPointDistribution":
        if not (a > 0 and b > 0):
            raise DomainError("a and b must be positive")
        return cls(-a, b, a / (a + b))

    @property
    def mean(self) -> float:
        return self.atom_neg * (1.0 - self.prob_pos) + self.atom_pos * self.prob_pos

    def affine(self, lam: float, shift: float = 0.0) -> DiscreteDistribution:
        """Law of ``lam * (X - shift)``."""
        if lam == 0:
            return DiscreteDistribution.point_mass(0.0)
        return DiscreteDistribution(
            (lam * (self.atom_pos - shift), lam * (self.atom_neg - shift)),
            (self.prob_pos, 1.0 - self.prob_pos),
        )

    def to_discrete(self) -> DiscreteDistribution:
        return self.affine(1.0)
