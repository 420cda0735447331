"""The 3n+p generalization of the conjugated map.

For every odd p, the map n -> odd part of 3n+p transports to positions the
same way the p=1 map does, with the equivalence x ~ 4x+q, q=(p-3)/2, in
place of x ~ 4x-1.  The branch layout on positions is derived here from q
alone: one stride-2 residue class, one stride-4 class, the class of
equivalents (chain ends), and finitely many leftover small positions that
get their own one-off rules.

CASE_SYSTEMS transcribes the published position-map systems for each small
p; audit_case_system checks every transcribed rule instance against the
generic step, which is the oracle throughout this module.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import _checked
from .progressions import Progression, intersect_residue

DEFAULT_CYCLE_STEPS = 100_000
DEFAULT_SCAN_WALK_LIMIT = 100_000


class NonpositiveImageError(ValueError):
    """3n+p fell below 1, so the family's step is undefined there."""


@dataclass(frozen=True)
class Family:
    """One member of the 3n+p family, for odd p (negative allowed)."""

    p: int

    def __post_init__(self) -> None:
        if self.p % 2 == 0:
            raise ValueError(f"family parameter must be odd, got {self.p}")

    @property
    def q(self) -> int:
        """Offset of the equivalence map x -> 4x+q."""
        return (self.p - 3) // 2

    @property
    def trivial_loop_position(self) -> int:
        """Position of the built-in fixed point (the odd value |p|)."""
        return (abs(self.p) + 1) // 2

    def is_equivalent_position(self, x: int) -> bool:
        """True when x = 4x'+q for some valid position x' (x ends a chain)."""
        return x % 4 == self.q % 4 and x >= self.q + 4


def family_step(x: int, family: Family) -> int:
    """Position image under the family's accelerated map.

    Sends position x (odd value 2x-1) to the position of the odd part of
    3(2x-1)+p.  Raises NonpositiveImageError when 3(2x-1)+p < 1.
    """
    if x < 1:
        raise ValueError(f"position must be >= 1, got {x}")
    t = 6 * x - 3 + family.p
    if t < 1:
        raise NonpositiveImageError(f"3n+p is {t} at position {x} for p={family.p}")
    _checked(t)
    j = (t & -t).bit_length() - 1
    return ((t >> j) + 1) >> 1


def family_equivalent(x: int, family: Family) -> int:
    """Next position sharing x's image in this family: 4x+q."""
    if x < 1:
        raise ValueError(f"position must be >= 1, got {x}")
    result = _checked(4 * x + family.q)
    if result < 1:
        raise ValueError(f"4x+q is {result}; p={family.p} has no equivalent of {x}")
    return result


def family_equivalent_n(x: int, count: int, family: Family) -> int:
    """count-fold family_equivalent; count=0 returns x."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    for _ in range(count):
        x = family_equivalent(x, family)
    return x


def lower_branches(family: Family) -> tuple[Progression, Progression]:
    """The two residue classes of positions with no lower equivalent.

    Equivalents occupy the class q mod 4 (from x >= q+4 up).  What remains
    is one full stride-2 class and one stride-4 class, determined by q's
    parity and residue; positions of the equivalent class below q+4 are
    the leftover exceptional positions handled by one-off rules.
    """
    q4 = family.q % 4
    if family.q % 2 == 0:
        stride2 = Progression(1, 2)
        stride4 = Progression(2, 4) if q4 == 0 else Progression(4, 4)
    else:
        stride2 = Progression(2, 2)
        stride4 = Progression(3, 4) if q4 == 1 else Progression(1, 4)
    return stride2, stride4


def exceptional_positions(family: Family) -> tuple[int, ...]:
    """Positions in the equivalent residue class that are too small to be one."""
    q4 = family.q % 4
    first = q4 if q4 >= 1 else 4
    return tuple(range(first, max(family.q + 4, first), 4))


def lower_preimages(x: int, family: Family) -> tuple[int, ...]:
    """All chain predecessors of x: lower-domain positions stepping to x.

    A predecessor x' satisfies 3(2x'-1)+p = (2x-1)*2^j for some j >= 1.
    Valid j values repeat with period 2 and deeper solutions are exactly
    the 4x+q images of shallower ones, so reducing every solution to its
    base yields the distinct predecessors: at most one for p not divisible
    by 3, at most two otherwise.  Every result is verified by stepping it.
    """
    if x < 1:
        raise ValueError(f"position must be >= 1, got {x}")
    target = 2 * x - 1
    bases: list[int] = []
    j_cap = max(8, abs(family.p).bit_length() + 3)
    for j in range(1, j_cap + 1):
        num = (target << j) - family.p
        if num < 3 or num % 3 != 0:
            continue
        m = num // 3
        if m % 2 == 0:
            continue
        candidate = (m + 1) >> 1
        while family.is_equivalent_position(candidate):
            candidate = (candidate - family.q) // 4
        if candidate in bases:
            continue
        try:
            if family_step(candidate, family) == x:
                bases.append(candidate)
        except NonpositiveImageError:
            pass  # a position whose step is undefined precedes nothing
    return tuple(sorted(bases))


# Position-map systems for small |p|, transcribed verbatim as published.
# Each rule is (domain_offset, domain_stride, image_offset, image_stride);
# stride 0 marks a one-off rule for a single exceptional position.
_Rule = tuple[int, int, int, int]

CASE_SYSTEMS: dict[int, tuple[_Rule, ...]] = {
    1: ((2, 2, 3, 3), (1, 4, 1, 3)),
    7: ((1, 2, 3, 3), (4, 4, 4, 3), (2, 0, 1, 0)),
    13: ((2, 2, 6, 3), (3, 4, 4, 3), (1, 0, 1, 0), (5, 0, 3, 0)),
    19: ((1, 2, 6, 3), (2, 4, 4, 3), (8, 0, 1, 0), (4, 0, 3, 0)),
    25: ((2, 2, 9, 3), (1, 4, 4, 3), (7, 0, 1, 0), (3, 0, 3, 0), (11, 0, 6, 0)),
    31: ((1, 2, 9, 3), (4, 4, 7, 3), (6, 0, 1, 0), (2, 0, 3, 0), (14, 0, 4, 0),
         (10, 0, 6, 0)),
    37: ((2, 2, 12, 3), (3, 4, 7, 3), (5, 0, 1, 0), (1, 0, 3, 0), (13, 0, 4, 0),
         (9, 0, 6, 0), (17, 0, 9, 0)),
    -1: ((1, 2, 1, 3), (4, 4, 3, 3)),
    5: ((2, 2, 4, 3), (3, 4, 3, 3), (1, 0, 1, 0)),
    11: ((1, 2, 4, 3), (2, 4, 3, 3), (4, 0, 1, 0)),
    17: ((2, 2, 7, 3), (1, 4, 3, 3), (3, 0, 1, 0), (7, 0, 4, 0)),
    23: ((1, 2, 7, 3), (4, 4, 6, 3), (2, 0, 1, 0), (6, 0, 4, 0), (10, 0, 3, 0)),
    3: ((1, 2, 2, 3), (2, 4, 2, 3)),
    9: ((2, 2, 5, 3), (1, 4, 2, 3), (3, 0, 2, 0)),
    15: ((1, 2, 5, 3), (4, 4, 5, 3), (2, 0, 2, 0), (6, 0, 2, 0)),
    21: ((2, 2, 8, 3), (3, 4, 5, 3), (1, 0, 2, 0), (5, 0, 2, 0), (9, 0, 5, 0)),
    27: ((1, 2, 8, 3), (2, 4, 5, 3), (4, 0, 2, 0), (8, 0, 5, 0), (12, 0, 2, 0)),
    33: ((2, 2, 11, 3), (1, 4, 5, 3), (3, 0, 2, 0), (7, 0, 5, 0), (11, 0, 2, 0),
         (15, 0, 8, 0)),
}

CASE_SYSTEM_PARAMS = tuple(sorted(CASE_SYSTEMS))


@dataclass(frozen=True)
class CaseRule:
    """One rule of a published system: a progression or a single position."""

    domain_offset: int
    domain_stride: int  # 0 for a one-off rule
    image_offset: int
    image_stride: int

    def instances(self, value_limit: int | None = None, m_limit: int | None = None):
        """Yield (domain value, expected image), bounded by value and/or index.

        value_limit caps the domain value, m_limit caps the progression
        index m; at least one bound is required (one-off rules yield their
        single instance under either).
        """
        if value_limit is None and m_limit is None:
            raise ValueError("need value_limit or m_limit")
        if self.domain_stride == 0:
            if value_limit is None or self.domain_offset <= value_limit:
                yield self.domain_offset, self.image_offset
            return
        m = 0
        while m_limit is None or m <= m_limit:
            value = self.domain_offset + self.domain_stride * m
            if value_limit is not None and value > value_limit:
                return
            yield value, self.image_offset + self.image_stride * m
            m += 1


def case_system(p: int) -> tuple[CaseRule, ...]:
    """The transcribed rule system for parameter p."""
    if p not in CASE_SYSTEMS:
        raise KeyError(f"no transcribed system for p={p}")
    return tuple(CaseRule(*r) for r in CASE_SYSTEMS[p])


@dataclass(frozen=True)
class CaseAuditReport:
    p: int
    checked: int
    mismatches: tuple[tuple[int, int, int, int], ...]  # (domain, depth, expected, got)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def audit_case_system(family: Family, rules: tuple[CaseRule, ...] | None = None,
                      *, value_limit: int | None = None, m_limit: int | None = None,
                      n_limit: int) -> CaseAuditReport:
    """Check every rule instance against the generic step.

    For each rule instance (d -> i), bounded by domain value and/or index m,
    and each equivalence depth n <= n_limit, asserts
    family_step(equiv^n(d)) == i.  Mismatches are report content, not
    exceptions.
    """
    if rules is None:
        rules = case_system(family.p)
    mismatches: list[tuple[int, int, int, int]] = []
    checked = 0
    for rule in rules:
        for domain_value, image_value in rule.instances(value_limit, m_limit):
            v = domain_value
            for depth in range(n_limit + 1):
                got = family_step(v, family)
                checked += 1
                if got != image_value:
                    mismatches.append((domain_value, depth, image_value, got))
                if depth < n_limit:
                    v = family_equivalent(v, family)
    return CaseAuditReport(family.p, checked, tuple(mismatches))


def _canonical_rotation(members: tuple[int, ...]) -> tuple[int, ...]:
    pivot = members.index(min(members))
    return members[pivot:] + members[:pivot]


@dataclass(frozen=True)
class CycleSearchReport:
    p: int
    seed_limit: int
    cycles: tuple[tuple[int, ...], ...]
    truncated_seeds: tuple[int, ...]
    rejected_seeds: tuple[int, ...]  # seeds whose walk hit a nonpositive image

    @property
    def cycle_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.cycles)


def find_cycles(family: Family, seed_limit: int,
                max_steps: int = DEFAULT_CYCLE_STEPS) -> CycleSearchReport:
    """Collect the cycles reachable from positions 1..seed_limit.

    Each seed is iterated with per-seed visited tracking; walks stop once
    they dip below the seed (that region was classified by an earlier
    seed), so every cycle whose minimum is <= seed_limit is discovered
    exactly once.  Cycles are reported in canonical min-first rotation.
    """
    if seed_limit < 1:
        raise ValueError(f"seed_limit must be >= 1, got {seed_limit}")
    found: set[tuple[int, ...]] = set()
    truncated: list[int] = []
    rejected: list[int] = []
    for seed in range(1, seed_limit + 1):
        index: dict[int, int] = {}
        path: list[int] = []
        v = seed
        while True:
            if v < seed:
                break
            at = index.get(v)
            if at is not None:
                found.add(_canonical_rotation(tuple(path[at:])))
                break
            index[v] = len(path)
            path.append(v)
            if len(path) > max_steps:
                truncated.append(seed)
                break
            try:
                v = family_step(v, family)
            except NonpositiveImageError:
                rejected.append(seed)
                break
    cycles = tuple(sorted(found, key=lambda c: (c[0], len(c), c)))
    return CycleSearchReport(family.p, seed_limit, cycles, tuple(truncated), tuple(rejected))


@dataclass(frozen=True)
class TwoToOneReport:
    limit: int
    images_checked: int
    count_violations: tuple[tuple[int, int], ...]    # (position, observed count)
    pairing_violations: tuple[tuple[int, int, int], ...]  # (image, first, second)

    @property
    def ok(self) -> bool:
        return not self.count_violations and not self.pairing_violations


def two_to_one_audit(limit: int) -> TwoToOneReport:
    """Audit the p=3 map: every image position is hit exactly twice.

    Tallies images of every base-domain position (positions not divisible
    by 4) through the generic step.  Positions 2 mod 3 up to limit must be
    hit exactly twice, everything else zero times, and the two predecessors
    of an image must pair as (x, 2x) -- each chain member's companion is
    exactly half or double.

    On the base domain the image is at least (3x+2)/4, so predecessors of
    images <= limit all lie at or below (4*limit - 2)/3.
    """
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    family = Family(3)
    x_max = (4 * limit - 2) // 3 + 1
    counts = [0] * (limit + 1)
    first_seen: dict[int, int] = {}
    pairing_bad: list[tuple[int, int, int]] = []
    for x in range(1, x_max + 1):
        if x & 3 == 0:
            continue
        y = family_step(x, family)
        if y > limit:
            continue
        counts[y] += 1
        if counts[y] == 1:
            first_seen[y] = x
        elif counts[y] == 2:
            if x != 2 * first_seen[y]:
                pairing_bad.append((y, first_seen[y], x))
    count_bad = []
    for y in range(1, limit + 1):
        expected = 2 if y % 3 == 2 else 0
        if counts[y] != expected:
            count_bad.append((y, counts[y]))
    return TwoToOneReport(limit, limit, tuple(count_bad), tuple(pairing_bad))


@dataclass(frozen=True)
class OrphanRecord:
    position: int
    direction: str  # "forward" | "backward"
    reason: str     # "cycle" | "truncated" | "rejected"
    cycle: tuple[int, ...] | None


@dataclass(frozen=True)
class StringScanReport:
    p: int
    limit: int
    scanned: int
    orphans: tuple[OrphanRecord, ...]

    @property
    def ok(self) -> bool:
        return not self.orphans

    @property
    def orphan_positions(self) -> tuple[int, ...]:
        return tuple(sorted({o.position for o in self.orphans}))


def string_scan(family: Family, limit: int,
                max_len: int = DEFAULT_SCAN_WALK_LIMIT) -> StringScanReport:
    """Scan positions 1..limit for membership in the family's chains.

    Forward, every position should walk to a chain end (an equivalent
    position).  Backward -- only for families with unique predecessors,
    i.e. p not divisible by 3 -- every position should walk to a head
    (a position with no predecessor).  A walk that cycles, truncates, or
    hits a nonpositive image makes the start an orphan.  The family's
    built-in fixed point is skipped; it is a loop, not a chain.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    trivial = family.trivial_loop_position
    orphans: list[OrphanRecord] = []
    walk_back = family.p % 3 != 0
    for x in range(1, limit + 1):
        if x == trivial:
            continue
        orphan = _walk_forward(x, family, max_len)
        if orphan is not None:
            orphans.append(orphan)
        if walk_back:
            orphan = _walk_backward(x, family, max_len)
            if orphan is not None:
                orphans.append(orphan)
    scanned = limit - (1 if trivial <= limit else 0)
    return StringScanReport(family.p, limit, scanned, tuple(orphans))


def _walk_forward(x: int, family: Family, max_len: int) -> OrphanRecord | None:
    index: dict[int, int] = {}
    path: list[int] = []
    v = x
    while not family.is_equivalent_position(v):
        at = index.get(v)
        if at is not None:
            return OrphanRecord(x, "forward", "cycle", _canonical_rotation(tuple(path[at:])))
        index[v] = len(path)
        path.append(v)
        if len(path) > max_len:
            return OrphanRecord(x, "forward", "truncated", None)
        try:
            v = family_step(v, family)
        except NonpositiveImageError:
            return OrphanRecord(x, "forward", "rejected", None)
    return None


def _walk_backward(x: int, family: Family, max_len: int) -> OrphanRecord | None:
    index: dict[int, int] = {}
    path: list[int] = []
    v = x
    while True:
        at = index.get(v)
        if at is not None:
            return OrphanRecord(x, "backward", "cycle", _canonical_rotation(tuple(path[at:])))
        index[v] = len(path)
        path.append(v)
        if len(path) > max_len:
            return OrphanRecord(x, "backward", "truncated", None)
        predecessors = lower_preimages(v, family)
        if not predecessors:
            return None  # reached a head
        v = predecessors[0]


def family_evolve_forward(family: Family, generation: int) -> tuple[Progression, ...]:
    """Forward chain evolution for a generalized family.

    Starts from the family's head classes and pushes every part through
    both lower branches, dropping the equivalent class.  Requires a family
    whose equivalent residue class contains no exceptional positions
    (p in {-1, 1, 3}, among small parameters), so that dropping the class
    drops only true chain ends; anything else would silently misplace the
    exceptional positions.
    """
    if generation < 0:
        raise ValueError(f"generation must be >= 0, got {generation}")
    if exceptional_positions(family):
        raise ValueError(
            f"p={family.p} has exceptional positions; its evolution is not a plain "
            "two-branch progression process"
        )
    if family.p % 3 == 0:
        parts: tuple[Progression, ...] = (Progression(1, 3), Progression(3, 3))
    else:
        parts = (Progression(2, 3),)
    branches = lower_branches(family)
    for _ in range(generation):
        children: list[Progression] = []
        for part in parts:
            for branch in branches:
                dom = intersect_residue(part, branch.intercept, branch.interval)
                if dom is None:
                    raise ValueError(f"part {part} misses branch {branch}")
                children.append(_family_branch_image(dom, branch.interval, family))
        parts = tuple(children)
    return parts


def _family_branch_image(dom: Progression, stride: int, family: Family) -> Progression:
    interval = _checked(3 * dom.interval // stride)
    image = family_step(dom.intercept, family)
    # the step must be affine on the branch; verify on the next element
    if family_step(dom.element(1), family) != image + interval:
        raise ValueError(f"step is not affine on {dom} (stride {stride}, p={family.p})")
    return Progression(image, interval)
