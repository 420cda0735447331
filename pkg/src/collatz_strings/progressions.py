"""Arithmetic-progression algebra underlying the branch structure of the map.

The objects of study are half-open progressions {a + b*t : t >= 0}.  The
conjugate step and its inverse act on such sets branch by branch, turning
an interval b into 3b/2 or 3b/4 forwards and 2b/3 or 4b/3 backwards.  This
module provides exact residue intersection, those four elementwise images,
the co-prime sampling check that keeps the recurrence bookkeeping honest,
and the branch-signature recurrence search.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable

from .core import (
    _checked,
    inverse_lower_step,
    lower_step,
    restriction_index,
)


@dataclass(frozen=True)
class Progression:
    """The set {intercept + interval*t : t >= 0}."""

    intercept: int
    interval: int

    def __post_init__(self) -> None:
        if self.intercept < 1:
            raise ValueError(f"intercept must be >= 1, got {self.intercept}")
        if self.interval < 1:
            raise ValueError(f"interval must be >= 1, got {self.interval}")

    def element(self, t: int) -> int:
        return self.intercept + self.interval * t

    def contains(self, x: int) -> bool:
        return x >= self.intercept and (x - self.intercept) % self.interval == 0

    def elements_in(self, lo: int, hi: int) -> list[int]:
        """Members in the half-open window [lo, hi)."""
        first = self.intercept
        if first < lo:
            first += ((lo - first + self.interval - 1) // self.interval) * self.interval
        return list(range(first, hi, self.interval))

    def count_in(self, lo: int, hi: int) -> int:
        first = self.intercept
        if first < lo:
            first += ((lo - first + self.interval - 1) // self.interval) * self.interval
        if first >= hi:
            return 0
        return (hi - 1 - first) // self.interval + 1

    def __str__(self) -> str:
        return f"{{{self.intercept}+{self.interval}t}}"


def intersect_residue(p: Progression, residue: int, mod: int) -> Progression | None:
    """Restrict p to its members congruent to residue (mod mod).

    Standard CRT split: solvable iff gcd(interval, mod) divides the offset,
    in which case the result is a progression with interval lcm(interval, mod).
    Returns None when the intersection is empty.
    """
    if mod < 1:
        raise ValueError(f"mod must be >= 1, got {mod}")
    residue %= mod
    a, b = p.intercept, p.interval
    g = gcd(b, mod)
    if (residue - a) % g != 0:
        return None
    m = mod // g
    # solve b*t = residue - a (mod mod); t is fixed mod m
    t0 = ((residue - a) // g * pow(b // g, -1, m)) % m if m > 1 else 0
    return Progression(_checked(a + b * t0), _checked(b * m))


def _branch_image(p: Progression, off_mod: tuple[int, int], num: int, den: int,
                  image_of: Callable[[int], int]) -> Progression:
    offset, mod = off_mod
    if p.intercept % mod != offset % mod or p.interval % mod != 0:
        raise ValueError(
            f"{p} is not inside the branch domain {offset} mod {mod}; intersect first"
        )
    return Progression(image_of(p.intercept), _checked(p.interval * num // den))


def image_even_branch(p: Progression) -> Progression:
    """Elementwise forward image of a progression of even positions (2+2m -> 3+3m)."""
    return _branch_image(p, (0, 2), 3, 2, lambda a: _checked(3 * a // 2))


def image_odd_branch(p: Progression) -> Progression:
    """Elementwise forward image of a progression inside 1 mod 4 (1+4m -> 1+3m)."""
    return _branch_image(p, (1, 4), 3, 4, lambda a: _checked((3 * a + 1) // 4))


def preimage_even_branch(p: Progression) -> Progression:
    """Elementwise inverse image landing on even positions (3+3m -> 2+2m)."""
    return _branch_image(p, (0, 3), 2, 3, lambda a: 2 * a // 3)


def preimage_odd_branch(p: Progression) -> Progression:
    """Elementwise inverse image landing inside 1 mod 4 (1+3m -> 1+4m)."""
    return _branch_image(p, (1, 3), 4, 3, lambda a: _checked((4 * a - 1) // 3))


@dataclass(frozen=True)
class SamplingVerdict:
    holds: bool
    counterexample: tuple[int, int] | None  # (sample index, observed gap)


def _first_gap_violation(tags, interval: int) -> tuple[int, int] | None:
    """First place where identical tags are not exactly `interval` apart."""
    last_seen: dict[int, int] = {}
    for i, tag in enumerate(tags):
        prev = last_seen.get(tag)
        if prev is not None and i - prev != interval:
            return i, i - prev
        last_seen[tag] = i
    return None


def sampling_lemma_check(base: int, power: int, period: int,
                         probe_len: int | None = None,
                         start: int = 0) -> SamplingVerdict:
    """Check that co-prime sampling preserves a periodic sequence's interval.

    Builds the tag sequence q_k = k mod base**power, whose identical tags sit
    exactly base**power apart, samples every period-th element starting at
    `start`, and verifies that consecutive identical tags in the sampled
    sequence again sit exactly base**power apart.  The sampling period must
    be co-prime with base; probe_len must cover at least two recurrences.
    """
    if base < 2 or power < 1 or period < 1:
        raise ValueError("need base >= 2, power >= 1, period >= 1")
    if gcd(period, base) != 1:
        raise ValueError(f"sampling period {period} is not co-prime with base {base}")
    interval = base ** power
    if probe_len is None:
        probe_len = 3 * interval
    if probe_len < 2 * interval + 1:
        raise ValueError(f"probe_len must be >= {2 * interval + 1} to see two recurrences")
    sampled = ((start + i * period) % interval for i in range(probe_len))
    violation = _first_gap_violation(sampled, interval)
    return SamplingVerdict(violation is None, violation)


_FORWARD_TAGS = {1: "even", 2: "odd"}
_BACKWARD_TAGS = {0: "down", 1: "up", 2: "head"}


@dataclass(frozen=True)
class Signature:
    """Branch record of a walk, one entry per step.

    Forward entries are branch indices (1 = even branch, 2 = branch inside
    1 mod 4, >= 3 = chain end, allowed only in final place).  Backward
    entries are residues mod 3 (0 = step down, 1 = step up, 2 = chain head,
    final place only).
    """

    direction: str  # "forward" | "backward"
    steps: tuple[int, ...]
    truncated: bool  # ended at a chain end before the requested length

    def __post_init__(self) -> None:
        if self.direction not in ("forward", "backward"):
            raise ValueError(f"unknown direction {self.direction!r}")
        if not self.steps:
            raise ValueError("a signature needs at least one step")
        terminal = (lambda s: s > 2) if self.direction == "forward" else (lambda s: s == 2)
        if any(terminal(s) for s in self.steps[:-1]):
            raise ValueError("a chain end may only appear as the final entry")

    @property
    def recurrence_gap(self) -> int:
        """Predicted spacing between positions sharing this signature."""
        if self.direction == "forward":
            return _checked(1 << sum(self.steps))
        return _checked(3 ** len(self.steps))

    @property
    def tags(self) -> tuple[str, ...]:
        if self.direction == "forward":
            return tuple(_FORWARD_TAGS.get(z, f"terminal[{z}]") for z in self.steps)
        return tuple(_BACKWARD_TAGS[r] for r in self.steps)


def forward_signature(x: int, steps: int) -> Signature:
    """Branch indices of x's first `steps` conjugate-map steps.

    The walk follows lower_step; reaching a position 3 mod 4 records that
    position's branch index as a final terminal entry and stops early.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    seq = []
    v = x
    for _ in range(steps):
        z = restriction_index(v)
        seq.append(z)
        if z > 2:
            return Signature("forward", tuple(seq), True)
        v = lower_step(v)
    return Signature("forward", tuple(seq), False)


def backward_signature(x: int, steps: int) -> Signature:
    """Residues of x's first `steps` inverse walk steps.

    Follows inverse_lower_step; a residue-2 position (a chain head) is
    recorded as a final entry and stops the walk early.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    seq = []
    v = x
    for _ in range(steps):
        r = v % 3
        seq.append(r)
        if r == 2:
            return Signature("backward", tuple(seq), True)
        v = inverse_lower_step(v)
    return Signature("backward", tuple(seq), False)


def _matches_forward(x: int, steps: tuple[int, ...]) -> bool:
    for z in steps:
        if restriction_index(x) != z:
            return False
        if z <= 2:
            x = lower_step(x)
    return True


def _matches_backward(x: int, steps: tuple[int, ...]) -> bool:
    for r in steps:
        if x % 3 != r:
            return False
        if r < 2:
            x = inverse_lower_step(x)
    return True


# Search cap: the recurrence is predicted at exactly one gap, so a small
# multiple suffices before declaring the prediction refuted.
RECURRENCE_SEARCH_FACTOR = 4


def first_recurrence_forward(x: int, steps: int) -> int | None:
    """Least x' > x whose forward signature equals x's, by brute scan.

    Scans up to RECURRENCE_SEARCH_FACTOR times the predicted gap and
    returns None if no recurrence appears in that range (a refutation of
    the predicted spacing).  The scan is independent of the prediction:
    every intermediate position is tested.
    """
    sig = forward_signature(x, steps)
    bound = RECURRENCE_SEARCH_FACTOR * sig.recurrence_gap
    for candidate in range(x + 1, _checked(x + bound + 1)):
        if _matches_forward(candidate, sig.steps):
            return candidate
    return None


def first_recurrence_backward(x: int, steps: int) -> int | None:
    """Least x' > x whose backward signature equals x's, by brute scan."""
    sig = backward_signature(x, steps)
    bound = RECURRENCE_SEARCH_FACTOR * sig.recurrence_gap
    for candidate in range(x + 1, _checked(x + bound + 1)):
        if _matches_backward(candidate, sig.steps):
            return candidate
    return None
