"""String formation: progression evolution, counting identities, and sweeps.

Forward process: start from the chain heads {2+3t} and push every part
through both branches of the one-to-one map, dropping the 3 mod 4 class
(chain ends) at each generation.  Backward process: start from the chain
ends {3+4t} and pull back through both inverse branches, dropping heads.
Both evolutions stay exact unions of arithmetic progressions, which makes
the counting identities and intercept bounds directly checkable.

The sweeps at the bottom verify, position by position, that every chain
closes: every position walks back to a head and forward to an end, and
every trajectory of the conjugate map passes through 3 mod 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .checkpoint import load_checkpoint, save_checkpoint
from .core import (
    DEFAULT_TRAJECTORY_STEPS,
    MAX_VALUE,
    WidthExceededError,
    _checked,
    inverse_lower_step,
    lower_step,
)
from .progressions import (
    Progression,
    image_even_branch,
    image_odd_branch,
    intersect_residue,
    preimage_even_branch,
    preimage_odd_branch,
)

FORWARD_SEED = Progression(2, 3)   # chain heads: residue 2 mod 3
BACKWARD_SEED = Progression(3, 4)  # chain ends: residue 3 mod 4

DEFAULT_WALK_LIMIT = 100_000
DEFAULT_ELEMENT_CAP = 10_000


@dataclass(frozen=True)
class EvolutionState:
    direction: str  # "forward" | "backward"
    generation: int
    parts: tuple[Progression, ...]

    def interval_weight(self) -> Fraction:
        """Exact density of the state: sum of 1/interval over parts."""
        return sum((Fraction(1, p.interval) for p in self.parts), Fraction(0))


def _forward_children(part: Progression) -> tuple[Progression, Progression]:
    even_dom = intersect_residue(part, 0, 2)
    odd_dom = intersect_residue(part, 1, 4)
    if even_dom is None or odd_dom is None:
        raise ValueError(f"part {part} does not meet both forward branches")
    return image_even_branch(even_dom), image_odd_branch(odd_dom)


def _backward_children(part: Progression) -> tuple[Progression, Progression]:
    down_dom = intersect_residue(part, 0, 3)
    up_dom = intersect_residue(part, 1, 3)
    if down_dom is None or up_dom is None:
        raise ValueError(f"part {part} does not meet both inverse branches")
    return preimage_even_branch(down_dom), preimage_odd_branch(up_dom)


def evolve_forward(generation: int) -> EvolutionState:
    """Generation k of the forward process, as an ordered union of parts.

    Child order is deterministic: even-branch child first, parent order
    preserved.  The 3 mod 4 intersection of each part ends its chains and
    is not propagated.
    """
    if generation < 0:
        raise ValueError(f"generation must be >= 0, got {generation}")
    parts: tuple[Progression, ...] = (FORWARD_SEED,)
    for _ in range(generation):
        children: list[Progression] = []
        for part in parts:
            children.extend(_forward_children(part))
        parts = tuple(children)
    return EvolutionState("forward", generation, parts)


def evolve_backward(generation: int) -> EvolutionState:
    """Generation k of the backward process (down-branch child first)."""
    if generation < 0:
        raise ValueError(f"generation must be >= 0, got {generation}")
    parts: tuple[Progression, ...] = (BACKWARD_SEED,)
    for _ in range(generation):
        children: list[Progression] = []
        for part in parts:
            children.extend(_backward_children(part))
        parts = tuple(children)
    return EvolutionState("backward", generation, parts)


@dataclass(frozen=True)
class InterceptAuditReport:
    direction: str
    generation: int
    part_violations: tuple[Progression, ...]
    bound_violations: tuple[tuple[Progression, Progression], ...]  # (parent, child)

    @property
    def ok(self) -> bool:
        return not self.part_violations and not self.bound_violations


def intercept_audit(state: EvolutionState) -> InterceptAuditReport:
    """Check intercept < interval for every part, plus the child bound.

    The realized children of each part must respect the recursion bound on
    new intercepts: forward children c of a part (a, b) satisfy
    c <= 3(a+3b-1)/4 + 1, backward children c <= 4(a+2b-1)/3 + 1.  Both are
    compared in cleared-denominator integer form.
    """
    part_bad = tuple(p for p in state.parts if p.intercept >= p.interval)
    bound_bad: list[tuple[Progression, Progression]] = []
    for part in state.parts:
        a, b = part.intercept, part.interval
        if state.direction == "forward":
            children = _forward_children(part)
            for child in children:
                if 4 * (child.intercept - 1) > 3 * (a + 3 * b - 1):
                    bound_bad.append((part, child))
        else:
            children = _backward_children(part)
            for child in children:
                if 3 * (child.intercept - 1) > 4 * (a + 2 * b - 1):
                    bound_bad.append((part, child))
    return InterceptAuditReport(state.direction, state.generation, part_bad, tuple(bound_bad))


@dataclass(frozen=True)
class CoverageCount:
    direction: str
    m: int
    window_start: int
    included: int
    open_count: int


def expected_coverage(direction: str, m: int) -> tuple[int, int]:
    """Closed-form prediction for coverage_count: (included, open)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if direction == "forward":
        included = sum(2 ** k * 3 ** (m - k - 1) for k in range(m))
        return included, 2 ** m
    if direction == "backward":
        included = sum(3 ** k * 4 ** (m - k - 1) for k in range(m))
        return included, 3 ** m
    raise ValueError(f"unknown direction {direction!r}")


def coverage_count(direction: str, m: int, window_start: int = 2) -> CoverageCount:
    """Count window members covered by the first m generations.

    The window is [window_start, window_start + 3**m) forward, 4**m
    backward.  Membership is taken as an explicit set union over the parts
    of generations 0..m-1, so the count does not presuppose disjointness.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if window_start < 2:
        raise ValueError(f"window_start must be >= 2, got {window_start}")
    if direction == "forward":
        window = 3 ** m
        states = [evolve_forward(k) for k in range(m)]
    elif direction == "backward":
        window = 4 ** m
        states = [evolve_backward(k) for k in range(m)]
    else:
        raise ValueError(f"unknown direction {direction!r}")
    _checked(window_start + window)
    members: set[int] = set()
    for state in states:
        for part in state.parts:
            members.update(part.elements_in(window_start, window_start + window))
    return CoverageCount(direction, m, window_start, len(members), window - len(members))


@dataclass(frozen=True)
class StringRecord:
    """One chain of the one-to-one map, from head (2 mod 3) to end (3 mod 4).

    elements is None when the chain is longer than the storage cap or when
    a walk truncated; head/tail are None on the truncated side.
    """

    head: int | None
    tail: int | None
    length: int
    elements: tuple[int, ...] | None
    truncated_backward: bool
    truncated_forward: bool

    @property
    def complete(self) -> bool:
        return not (self.truncated_backward or self.truncated_forward)


def build_string_containing(x: int, max_len: int = DEFAULT_WALK_LIMIT,
                            element_cap: int = DEFAULT_ELEMENT_CAP) -> StringRecord:
    """Walk x back to its chain head, then forward to the chain end.

    Position 1 is excluded: it is the fixed point of the map, not a chain.
    Either walk exceeding max_len marks the record truncated on that side;
    nothing is silently dropped.
    """
    if x < 2:
        raise ValueError(f"chains cover positions >= 2, got {x}")
    v = x
    back_steps = 0
    while v % 3 != 2:
        v = inverse_lower_step(v)
        back_steps += 1
        if back_steps > max_len:
            return StringRecord(None, None, back_steps, None, True, False)
    head = v
    chain = [head]
    v = head
    while v & 3 != 3:
        v = lower_step(v)
        chain.append(v)
        if len(chain) > max_len:
            return StringRecord(head, None, len(chain), None, False, True)
    elements = tuple(chain) if len(chain) <= element_cap else None
    return StringRecord(head, chain[-1], len(chain), elements, False, False)


@dataclass(frozen=True)
class PartitionAuditReport:
    limit: int
    positions_checked: int
    heads: frozenset[int]
    truncated: tuple[tuple[int, str], ...]      # (position, direction)
    conflicts: tuple[tuple[int, int, int], ...]  # (element, head_a, head_b)
    longest_chain: int

    @property
    def ok(self) -> bool:
        return not self.truncated and not self.conflicts

    @property
    def string_count(self) -> int:
        return len(self.heads)

    def merge(self, other: "PartitionAuditReport") -> "PartitionAuditReport":
        """Combine audits of disjoint position ranges."""
        return PartitionAuditReport(
            limit=max(self.limit, other.limit),
            positions_checked=self.positions_checked + other.positions_checked,
            heads=self.heads | other.heads,
            truncated=tuple(sorted(self.truncated + other.truncated)),
            conflicts=tuple(sorted(self.conflicts + other.conflicts)),
            longest_chain=max(self.longest_chain, other.longest_chain),
        )


def partition_audit(limit: int, max_len: int = DEFAULT_WALK_LIMIT,
                    lo: int = 2) -> PartitionAuditReport:
    """Verify that every position in [lo, limit] sits in exactly one chain.

    For each position the full chain is rebuilt; every element met is
    hashed to the chain's head, and any element later seen under a second
    head is a conflict (the one-to-one map should make this impossible).
    Truncated walks are findings, not errors.
    """
    if limit < lo or lo < 2:
        raise ValueError(f"need 2 <= lo <= limit, got lo={lo}, limit={limit}")
    head_of: dict[int, int] = {}
    truncated: list[tuple[int, str]] = []
    conflicts: list[tuple[int, int, int]] = []
    heads: set[int] = set()
    longest = 0
    for x in range(lo, limit + 1):
        v = x
        steps = 0
        while v % 3 != 2:
            v = inverse_lower_step(v)
            steps += 1
            if steps > max_len:
                truncated.append((x, "backward"))
                break
        else:
            head = v
            heads.add(head)
            chain = [head]
            while v & 3 != 3:
                v = lower_step(v)
                chain.append(v)
                if len(chain) > max_len:
                    truncated.append((x, "forward"))
                    break
            else:
                longest = max(longest, len(chain))
                for element in chain:
                    seen = head_of.get(element)
                    if seen is None:
                        head_of[element] = head
                    elif seen != head:
                        conflicts.append((element, seen, head))
    return PartitionAuditReport(
        limit=limit,
        positions_checked=limit - lo + 1,
        heads=frozenset(heads),
        truncated=tuple(truncated),
        conflicts=tuple(conflicts),
        longest_chain=longest,
    )


@dataclass(frozen=True)
class SweepReport:
    """Aggregates of a first-passage sweep over [lo, hi]."""

    lo: int
    hi: int
    max_steps: int
    processed: int
    hits: int
    truncated: tuple[int, ...]
    total_steps: int
    max_steps_observed: int
    argmax_position: int
    next_position: int  # first position not yet processed; hi+1 when complete

    @property
    def complete(self) -> bool:
        return self.next_position > self.hi

    @property
    def mean_steps(self) -> float:
        return self.total_steps / self.hits if self.hits else 0.0

    def merge(self, other: "SweepReport") -> "SweepReport":
        """Combine complete sweeps of disjoint ranges (associative, commutative)."""
        if not (self.complete and other.complete):
            raise ValueError("only complete sweeps can be merged")
        if self.max_steps != other.max_steps:
            raise ValueError("sweeps were run with different step budgets")
        if self.max_steps_observed > other.max_steps_observed:
            arg = self.argmax_position
        elif self.max_steps_observed < other.max_steps_observed:
            arg = other.argmax_position
        else:
            arg = min(self.argmax_position, other.argmax_position)
        return SweepReport(
            lo=min(self.lo, other.lo),
            hi=max(self.hi, other.hi),
            max_steps=self.max_steps,
            processed=self.processed + other.processed,
            hits=self.hits + other.hits,
            truncated=tuple(sorted(self.truncated + other.truncated)),
            total_steps=self.total_steps + other.total_steps,
            max_steps_observed=max(self.max_steps_observed, other.max_steps_observed),
            argmax_position=arg,
            next_position=max(self.hi, other.hi) + 1,
        )

    def aggregates(self) -> dict:
        return {
            "processed": self.processed,
            "hits": self.hits,
            "truncated": list(self.truncated),
            "total_steps": self.total_steps,
            "max_steps_observed": self.max_steps_observed,
            "argmax_position": self.argmax_position,
        }


def _sweep_identity(lo: int, hi: int, max_steps: int) -> dict:
    return {"command": "passage", "direction": "forward", "lo": lo, "hi": hi,
            "max_steps": max_steps}


def passage_sweep(lo: int, hi: int, max_steps: int = DEFAULT_TRAJECTORY_STEPS,
                  checkpoint_path: str | None = None,
                  checkpoint_every: int = 1 << 20,
                  resume: bool = False,
                  budget: int | None = None) -> SweepReport:
    """First-passage sweep: every position in [lo, hi] must reach 3 mod 4.

    Iterates the conjugate step from each position (the arithmetic is the
    same as trajectory_report's, inlined for throughput) and records the
    number of steps to the first 3 mod 4 value.  Positions exhausting
    max_steps are truncation findings -- potential counterexamples.

    With checkpoint_path set, progress is checkpointed atomically every
    checkpoint_every positions; resume=True continues an interrupted run
    with identical final aggregates.  budget caps the positions processed
    in this invocation (the report then has complete == False).
    """
    if lo < 2 or hi < lo:
        raise ValueError(f"need 2 <= lo <= hi, got lo={lo}, hi={hi}")
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    if hi > MAX_VALUE:
        raise WidthExceededError("sweep bound exceeds the working range")

    start = lo
    hits = 0
    truncated: list[int] = []
    total_steps = 0
    max_seen = 0
    argmax = lo
    if resume:
        if checkpoint_path is None:
            raise ValueError("resume requires a checkpoint path")
        state = load_checkpoint(checkpoint_path)
        expect = _sweep_identity(lo, hi, max_steps)
        got = {k: state.get(k) for k in expect}
        if got != expect:
            raise ValueError(f"checkpoint does not match this run: {got} != {expect}")
        agg = state["aggregates"]
        start = state["next_position"]
        hits = agg["hits"]
        truncated = list(agg["truncated"])
        total_steps = agg["total_steps"]
        max_seen = agg["max_steps_observed"]
        argmax = agg["argmax_position"]

    deadline = hi if budget is None else min(hi, start + budget - 1)
    processed_before = start - lo
    since_checkpoint = 0
    x = start
    while x <= deadline:
        v = x
        steps = 0
        while v & 3 != 3:
            if steps >= max_steps:
                steps = -1
                break
            t = 6 * v - 2
            if t > MAX_VALUE:
                raise WidthExceededError(f"trajectory of {x} left the working range")
            j = (t & -t).bit_length() - 1
            v = ((t >> j) + 1) >> 1
            steps += 1
        if steps < 0:
            truncated.append(x)
        else:
            hits += 1
            total_steps += steps
            if steps > max_seen:
                max_seen = steps
                argmax = x
        x += 1
        since_checkpoint += 1
        if checkpoint_path is not None and since_checkpoint >= checkpoint_every:
            _write_sweep_checkpoint(checkpoint_path, lo, hi, max_steps, x, hits,
                                    truncated, total_steps, max_seen, argmax)
            since_checkpoint = 0

    report = SweepReport(
        lo=lo, hi=hi, max_steps=max_steps,
        processed=processed_before + (deadline - start + 1),
        hits=hits, truncated=tuple(truncated), total_steps=total_steps,
        max_steps_observed=max_seen, argmax_position=argmax,
        next_position=deadline + 1,
    )
    if checkpoint_path is not None:
        _write_sweep_checkpoint(checkpoint_path, lo, hi, max_steps, deadline + 1,
                                hits, truncated, total_steps, max_seen, argmax)
    return report


def _write_sweep_checkpoint(path: str, lo: int, hi: int, max_steps: int,
                            next_position: int, hits: int, truncated: list[int],
                            total_steps: int, max_seen: int, argmax: int) -> None:
    payload = dict(_sweep_identity(lo, hi, max_steps))
    payload["next_position"] = next_position
    payload["last_completed"] = next_position - 1
    payload["aggregates"] = {
        "hits": hits,
        "truncated": sorted(truncated),
        "total_steps": total_steps,
        "max_steps_observed": max_seen,
        "argmax_position": argmax,
    }
    save_checkpoint(path, payload)


def sweep_report_from_shards(shards: list[SweepReport]) -> SweepReport:
    """Fold complete shard reports into one (order-independent)."""
    if not shards:
        raise ValueError("no shards to merge")
    merged = shards[0]
    for shard in shards[1:]:
        merged = merged.merge(shard)
    return merged
