"""Integer partitions, gap-constrained chains, and the exhaustive enumerations
used as independent counting oracles.

Everything in this module counts by explicit construction.  None of it touches
the series algebra (the only import from ``series`` is the ResidueClass data
type), so agreement between chain enumeration and series coefficients is a
genuine two-route cross-check.
"""

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .series import ResidueClass

__all__ = [
    "Partition",
    "GapBound",
    "ChainConstraint",
    "parse_partition",
    "conjugate",
    "chain_violation",
    "satisfies_chain",
    "enumerate_chain",
    "count_chain_by_weight",
    "enumerate_partitions",
    "enumerate_partitions_with_parts",
    "repetition_bounded",
    "no_part_divisible",
    "partitions_repetition_bounded",
    "partitions_no_part_divisible",
]


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive parts; the weight is their sum."""

    parts: tuple[int, ...]
    weight: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        for i, p in enumerate(self.parts):
            if p < 1:
                raise ValueError(f"parts must be positive, got {p} at position {i + 1}")
            if i and self.parts[i - 1] < p:
                raise ValueError(
                    f"parts must be weakly decreasing, got {self.parts[i - 1]} "
                    f"before {p}"
                )
        object.__setattr__(self, "weight", sum(self.parts))

    @classmethod
    def of(cls, parts: Iterable[int]) -> "Partition":
        return cls(tuple(parts))

    @classmethod
    def from_vector(cls, vector: Sequence[int]) -> "Partition":
        """Drop the trailing zeros of a chain vector, keep the positive prefix."""
        k = len(vector)
        while k and vector[k - 1] == 0:
            k -= 1
        return cls(tuple(vector[:k]))

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "[" + ",".join(str(p) for p in self.parts) + "]"


def parse_partition(text: str) -> Partition:
    """Parse the bracketed form ``[7,6,4,2,1]``; the empty partition is ``[]``."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"partition literal must be bracketed, got {text!r}")
    inner = body[1:-1].strip()
    if not inner:
        return Partition(())
    try:
        parts = tuple(int(tok) for tok in inner.split(","))
    except ValueError:
        raise ValueError(f"invalid partition literal {text!r}") from None
    return Partition(parts)


def conjugate(p: Partition) -> Partition:
    """Transpose of the Young diagram; an involution preserving weight."""
    if not p.parts:
        return p
    return Partition(
        tuple(sum(1 for x in p.parts if x >= j) for j in range(1, p.parts[0] + 1))
    )


@dataclass(frozen=True)
class GapBound:
    """Bounds r <= a - b <= s on one adjacent difference; no upper if ``upper``
    is None."""

    lower: int
    upper: int | None = None

    def __post_init__(self) -> None:
        if self.lower < 0:
            raise ValueError("gap lower bound must be nonnegative")
        if self.upper is not None and self.upper < self.lower:
            raise ValueError(f"gap upper bound {self.upper} below lower {self.lower}")

    def admits(self, difference: int) -> bool:
        if difference < self.lower:
            return False
        return self.upper is None or difference <= self.upper


@dataclass(frozen=True)
class ChainConstraint:
    """Per-slot difference bounds a_1 >= a_2 >= ... >= a_m >= 0.

    ``gaps[s]`` constrains a_{s+1} - a_{s+2}; ``terminal`` constrains the last
    entry a_m itself (its difference from 0).
    """

    gaps: tuple[GapBound, ...]
    terminal: GapBound

    @property
    def slots(self) -> int:
        return len(self.gaps) + 1

    @classmethod
    def from_lower_gaps(cls, lowers: Sequence[int], terminal: int) -> "ChainConstraint":
        return cls(tuple(GapBound(g) for g in lowers), GapBound(terminal))

    @classmethod
    def uniform(cls, slots: int, gap: GapBound, terminal: GapBound) -> "ChainConstraint":
        if slots < 1:
            raise ValueError("a chain needs at least one slot")
        return cls((gap,) * (slots - 1), terminal)


def chain_violation(vector: Sequence[int], chain: ChainConstraint) -> str | None:
    """Description of the first violated position, or None if the vector
    satisfies the chain."""
    if len(vector) != chain.slots:
        raise ValueError(
            f"vector length {len(vector)} does not match {chain.slots} slots"
        )
    for s, bound in enumerate(chain.gaps):
        d = vector[s] - vector[s + 1]
        if not bound.admits(d):
            return (
                f"difference {d} between slots {s + 1} and {s + 2} violates "
                f"[{bound.lower}, {'inf' if bound.upper is None else bound.upper}]"
            )
    last = vector[-1]
    if not chain.terminal.admits(last):
        return (
            f"terminal value {last} violates "
            f"[{chain.terminal.lower}, "
            f"{'inf' if chain.terminal.upper is None else chain.terminal.upper}]"
        )
    return None


def satisfies_chain(vector: Sequence[int], chain: ChainConstraint) -> bool:
    return chain_violation(vector, chain) is None


def enumerate_chain(chain: ChainConstraint, weight: int) -> list[tuple[int, ...]]:
    """All nonnegative vectors of length ``chain.slots`` satisfying the chain
    and summing to ``weight``, in lexicographically decreasing order.

    Depth-first over slots from the largest down, pruning on the remaining
    weight against the minimal and maximal sums still achievable.
    """
    if weight < 0:
        return []
    m = chain.slots
    lows = [g.lower for g in chain.gaps]
    highs = [g.upper for g in chain.gaps]
    # smallest feasible value at each slot, forced by lower gaps and terminal
    min_value = [0] * m
    min_value[m - 1] = chain.terminal.lower
    for s in range(m - 2, -1, -1):
        min_value[s] = min_value[s + 1] + lows[s]
    min_tail = [0] * (m + 1)
    for s in range(m - 1, -1, -1):
        min_tail[s] = min_tail[s + 1] + min_value[s]
    out: list[tuple[int, ...]] = []

    def descend(s: int, prev: int, remaining: int, prefix: tuple[int, ...]) -> None:
        lo = min_value[s]
        hi = remaining - min_tail[s + 1]
        if s > 0:
            hi = min(hi, prev - lows[s - 1])
            if highs[s - 1] is not None:
                lo = max(lo, prev - highs[s - 1])
        if s == m - 1:
            v = remaining
            if lo <= v <= hi and chain.terminal.admits(v):
                out.append(prefix + (v,))
            return
        for v in range(hi, lo - 1, -1):
            rest = remaining - v
            top = v
            capacity = 0
            feasible = True
            for t in range(s + 1, m):
                top -= lows[t - 1]
                if top < min_value[t]:
                    feasible = False
                    break
                capacity += top
            # both failure modes worsen monotonically as v decreases
            if not feasible or rest > capacity:
                break
            descend(s + 1, v, rest, prefix + (v,))

    descend(0, 0, weight, ())
    return out


def count_chain_by_weight(chain: ChainConstraint, max_weight: int) -> list[int]:
    """Counts of chain vectors for every weight 0..max_weight."""
    return [len(enumerate_chain(chain, w)) for w in range(max_weight + 1)]


def enumerate_partitions(weight: int, max_part: int | None = None) -> list[Partition]:
    """All partitions of ``weight`` (parts <= max_part when given), in
    lexicographically decreasing order."""
    if weight < 0:
        return []
    cap = weight if max_part is None else min(max_part, weight)
    out: list[Partition] = []

    def grow(remaining: int, largest: int, prefix: tuple[int, ...]) -> None:
        if remaining == 0:
            out.append(Partition(prefix))
            return
        for part in range(min(largest, remaining), 0, -1):
            grow(remaining - part, part, prefix + (part,))

    grow(weight, cap, ())
    return out


def enumerate_partitions_with_parts(rc: ResidueClass, weight: int) -> list[Partition]:
    """All partitions of ``weight`` into parts allowed by ``rc``, in
    lexicographically decreasing order."""
    if weight < 0:
        return []
    allowed = [k for k in range(weight, 0, -1) if rc.allows(k)]
    out: list[Partition] = []

    def grow(remaining: int, start: int, prefix: tuple[int, ...]) -> None:
        if remaining == 0:
            out.append(Partition(prefix))
            return
        for i in range(start, len(allowed)):
            part = allowed[i]
            if part <= remaining:
                grow(remaining - part, i, prefix + (part,))

    grow(weight, 0, ())
    return out


def repetition_bounded(p: Partition, modulus: int) -> bool:
    """True when every part value occurs strictly fewer than ``modulus`` times."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    return all(count < modulus for count in Counter(p.parts).values())


def no_part_divisible(p: Partition, modulus: int) -> bool:
    """True when no part is divisible by ``modulus``."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    return all(part % modulus for part in p.parts)


def partitions_repetition_bounded(weight: int, modulus: int) -> list[Partition]:
    return [p for p in enumerate_partitions(weight) if repetition_bounded(p, modulus)]


def partitions_no_part_divisible(weight: int, modulus: int) -> list[Partition]:
    return [p for p in enumerate_partitions(weight) if no_part_divisible(p, modulus)]
