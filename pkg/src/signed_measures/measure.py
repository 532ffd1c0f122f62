"""Finitely supported signed measures on the half-open interval [0, T).

A measure is a finite list of weighted atoms plus a piecewise-constant
diffuse density.  All operations are exact (floating-point arithmetic only,
no discretization), and all objects are immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DuplicateLocation, NonAtomicInput

DEFAULT_T = 1.0


@dataclass(frozen=True)
class Interval:
    """Half-open interval [lo, hi)."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise ValueError(f"interval needs lo <= hi, got [{self.lo}, {self.hi})")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x < self.hi


class BorelSet:
    """Finite disjoint union of half-open intervals, kept in canonical form.

    Overlapping or touching input intervals are merged, so two BorelSets
    describing the same point set compare equal.
    """

    def __init__(self, intervals):
        ivs = sorted(
            (Interval(float(i[0]), float(i[1])) if not isinstance(i, Interval) else i
             for i in intervals),
            key=lambda iv: iv.lo,
        )
        merged: list[Interval] = []
        for iv in ivs:
            if iv.length == 0:
                continue
            if merged and iv.lo <= merged[-1].hi:
                if iv.hi > merged[-1].hi:
                    merged[-1] = Interval(merged[-1].lo, iv.hi)
            else:
                merged.append(iv)
        self.intervals: tuple[Interval, ...] = tuple(merged)

    @classmethod
    def empty(cls) -> "BorelSet":
        return cls([])

    @classmethod
    def interval(cls, lo, hi) -> "BorelSet":
        return cls([(lo, hi)])

    def contains(self, x: float) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    @property
    def length(self) -> float:
        return sum(iv.length for iv in self.intervals)

    def __eq__(self, other):
        return isinstance(other, BorelSet) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        return "BorelSet(%s)" % ", ".join(f"[{iv.lo}, {iv.hi})" for iv in self.intervals)

    def to_json(self):
        return [[iv.lo, iv.hi] for iv in self.intervals]

    @classmethod
    def from_json(cls, data) -> "BorelSet":
        return cls(data)


@dataclass(frozen=True)
class Atom:
    location: float
    weight: float

    def __post_init__(self):
        if self.weight == 0:
            raise ValueError("atom weight must be nonzero")


@dataclass(frozen=True)
class StepDensity:
    """Piecewise-constant density: levels[i] on [breaks[i], breaks[i+1])."""

    breaks: tuple[float, ...] = ()
    levels: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "breaks", tuple(float(b) for b in self.breaks))
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))
        if self.breaks:
            if len(self.levels) != len(self.breaks) - 1:
                raise ValueError("need len(levels) == len(breaks) - 1")
            if any(b2 <= b1 for b1, b2 in zip(self.breaks, self.breaks[1:])):
                raise ValueError("breaks must be strictly increasing")
        elif self.levels:
            raise ValueError("levels without breaks")

    @classmethod
    def zero(cls) -> "StepDensity":
        return cls((), ())

    @classmethod
    def constant(cls, level: float, lo: float = 0.0, hi: float = DEFAULT_T) -> "StepDensity":
        if level == 0.0:
            return cls.zero()
        return cls((lo, hi), (level,))

    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.levels)

    def value_at(self, x: float) -> float:
        for (lo, hi), lvl in zip(zip(self.breaks, self.breaks[1:]), self.levels):
            if lo <= x < hi:
                return lvl
        return 0.0

    def integral(self, iv: Interval) -> float:
        total = 0.0
        for (lo, hi), lvl in zip(zip(self.breaks, self.breaks[1:]), self.levels):
            overlap = min(hi, iv.hi) - max(lo, iv.lo)
            if overlap > 0:
                total += lvl * overlap
        return total

    def clipped(self, sign: int) -> "StepDensity":
        """Positive (sign=+1) or negative (sign=-1) part, as a density >= 0."""
        if not self.breaks:
            return StepDensity.zero()
        levels = tuple(max(sign * v, 0.0) for v in self.levels)
        return StepDensity(self.breaks, levels)

    def scaled(self, a: float) -> "StepDensity":
        if a == 0.0 or not self.breaks:
            return StepDensity.zero()
        return StepDensity(self.breaks, tuple(a * v for v in self.levels))

    def __add__(self, other: "StepDensity") -> "StepDensity":
        if self.is_zero() or not self.breaks:
            return other
        if other.is_zero() or not other.breaks:
            return self
        cuts = sorted(set(self.breaks) | set(other.breaks))
        levels = []
        for lo, hi in zip(cuts, cuts[1:]):
            mid = 0.5 * (lo + hi)
            levels.append(self.value_at(mid) + other.value_at(mid))
        return StepDensity(tuple(cuts), tuple(levels))


class SignedAtomicMeasure:
    """Signed measure = atoms + piecewise-constant diffuse density."""

    def __init__(self, atoms=(), diffuse: StepDensity | None = None):
        merged: dict[float, float] = {}
        for a in atoms:
            if not isinstance(a, Atom):
                a = Atom(float(a[0]), float(a[1]))
            merged[a.location] = merged.get(a.location, 0.0) + a.weight
        self.atoms: tuple[Atom, ...] = tuple(
            Atom(loc, w) for loc, w in sorted(merged.items()) if w != 0.0
        )
        self.diffuse: StepDensity = diffuse if diffuse is not None else StepDensity.zero()

    @classmethod
    def zero(cls) -> "SignedAtomicMeasure":
        return cls()

    def is_zero(self) -> bool:
        return not self.atoms and self.diffuse.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, SignedAtomicMeasure)
            and self.atoms == other.atoms
            and self.diffuse.breaks == other.diffuse.breaks
            and self.diffuse.levels == other.diffuse.levels
        )

    def __repr__(self):
        return f"SignedAtomicMeasure(atoms={len(self.atoms)}, diffuse={not self.diffuse.is_zero()})"

    def to_json(self) -> dict:
        return {
            "atoms": [{"loc": a.location, "w": a.weight} for a in self.atoms],
            "diffuse": {
                "breaks": list(self.diffuse.breaks),
                "levels": list(self.diffuse.levels),
            },
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> "SignedAtomicMeasure":
        if isinstance(data, str):
            data = json.loads(data)
        atoms = [Atom(d["loc"], d["w"]) for d in data.get("atoms", [])]
        dd = data.get("diffuse", {})
        diffuse = StepDensity(tuple(dd.get("breaks", ())), tuple(dd.get("levels", ())))
        return cls(atoms, diffuse)


@dataclass(frozen=True)
class MarkedPointPattern:
    """List of (location, nonzero mark) pairs with distinct locations."""

    points: tuple[tuple[float, float], ...] = ()


def evaluate(mu: SignedAtomicMeasure, B: BorelSet) -> float:
    """mu(B): atom weights inside B plus the diffuse integral over B."""
    total = 0.0
    for a in mu.atoms:
        if B.contains(a.location):
            total += a.weight
    for iv in B.intervals:
        total += mu.diffuse.integral(iv)
    return total


def jordan_decompose(mu: SignedAtomicMeasure):
    """Split mu into its unique (positive, negative) mutually singular parts."""
    pos_atoms = [a for a in mu.atoms if a.weight > 0]
    neg_atoms = [Atom(a.location, -a.weight) for a in mu.atoms if a.weight < 0]
    pos = SignedAtomicMeasure(pos_atoms, mu.diffuse.clipped(+1))
    neg = SignedAtomicMeasure(neg_atoms, mu.diffuse.clipped(-1))
    return pos, neg


def total_variation(mu: SignedAtomicMeasure, B: BorelSet) -> float:
    pos, neg = jordan_decompose(mu)
    return evaluate(pos, B) + evaluate(neg, B)


def to_marked_point_pattern(mu: SignedAtomicMeasure) -> MarkedPointPattern:
    if not mu.diffuse.is_zero():
        raise NonAtomicInput("measure has a nonzero diffuse part")
    return MarkedPointPattern(tuple((a.location, a.weight) for a in mu.atoms))


def from_marked_point_pattern(pattern: MarkedPointPattern) -> SignedAtomicMeasure:
    locs = [p[0] for p in pattern.points]
    if len(set(locs)) != len(locs):
        raise DuplicateLocation("marked points must have distinct locations")
    return SignedAtomicMeasure([Atom(loc, mark) for loc, mark in pattern.points])


def linear_combine(a: float, mu: SignedAtomicMeasure, b: float, nu: SignedAtomicMeasure) -> SignedAtomicMeasure:
    atoms = [(at.location, a * at.weight) for at in mu.atoms if a != 0.0]
    atoms += [(at.location, b * at.weight) for at in nu.atoms if b != 0.0]
    diffuse = mu.diffuse.scaled(a) + nu.diffuse.scaled(b)
    return SignedAtomicMeasure([p for p in atoms if p[1] != 0.0], diffuse)
