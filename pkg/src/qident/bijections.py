"""Explicit partition bijections and exhaustive certification.

Three maps live here: swapping the offsets of two interpretations that share a
term family (a pure shift on the underlying base vector), the two-step map
from congruence-restricted partitions onto the classical gap-2 chains of the
second Rogers-Ramanujan identity, and the divide-by-M / merge-M-copies pair
behind Euler-Glaisher equinumerosity.
"""

import json
from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from typing import Any

from .partitions import ChainConstraint, GapBound, Partition, chain_violation
from .profiles import ProfileFamily, profile_to_chain

__all__ = [
    "BijectionRecord",
    "CertificationReport",
    "profile_bijection",
    "rr2_step_c",
    "rr2_forward",
    "rr2_record",
    "rr2_inverse",
    "weight_relation_check",
    "glaisher_forward",
    "glaisher_forward_steps",
    "glaisher_inverse",
    "glaisher_inverse_steps",
    "certify_bijection",
]


@dataclass(frozen=True)
class BijectionRecord:
    """One application of a map: input and output vectors with their weights
    and the term index n."""

    source: tuple[int, ...]
    image: tuple[int, ...]
    term_index: int
    source_weight: int
    image_weight: int

    def __post_init__(self) -> None:
        if self.source_weight != sum(self.source):
            raise ValueError("recorded source weight does not match the vector")
        if self.image_weight != sum(self.image):
            raise ValueError("recorded image weight does not match the vector")


def profile_bijection(
    vector: Sequence[int],
    source: ProfileFamily,
    target: ProfileFamily,
    index: int,
) -> tuple[int, ...]:
    """Map a vector satisfying the source profile's chain at ``index`` onto the
    target profile's chain by swapping offsets slotwise:

        b_s = a_s - pi_source(index, s) + pi_target(index, s).

    The underlying base vector a_s - pi_source(index, s) is preserved, so the
    same call with source and target exchanged inverts the map.
    """
    src = source.offsets_at(index)
    tgt = target.offsets_at(index)
    if len(src) != len(tgt):
        raise ValueError(
            f"slot counts differ at index {index}: "
            f"{source.name} has {len(src)}, {target.name} has {len(tgt)}"
        )
    v = tuple(vector)
    if len(v) != len(src):
        raise ValueError(f"vector length {len(v)} does not match {len(src)} slots")
    violation = chain_violation(v, profile_to_chain(source, index))
    if violation is not None:
        raise ValueError(f"input violates the chain of {source.name}: {violation}")
    return tuple(a - sa + ta for a, sa, ta in zip(v, src, tgt))


def _require_rr2_parts(parts: tuple[int, ...]) -> None:
    for i, p in enumerate(parts, start=1):
        if p % 5 not in (2, 3):
            raise ValueError(
                f"part {p} (position {i}) is not congruent to 2 or 3 mod 5"
            )


def rr2_step_c(a: Partition, n: int | None = None) -> tuple[int, ...]:
    """First step of the map: c_s = a_s - 3*floor(a_s/5) - 1, plus n^2 on the
    first slot.  The image satisfies c_1 >= c_2 + n^2 >= ... >= c_n >= 1."""
    parts = a.parts
    if n is None:
        n = len(parts)
    elif n != len(parts):
        raise ValueError(f"term index {n} does not match {len(parts)} parts")
    _require_rr2_parts(parts)
    return tuple(
        p - 3 * (p // 5) - 1 + (n * n if s == 1 else 0)
        for s, p in enumerate(parts, start=1)
    )


def rr2_forward(a: Partition) -> tuple[int, ...]:
    """Full map onto the classical chain b_1 >=_2 ... >=_2 b_n >= 2: the first
    step above followed by the offset swap from (n^2+1, 1, ..., 1) to
    (2n, 2n-2, ..., 2).  Preserves the number of parts, not the weight."""
    c = rr2_step_c(a)
    n = len(c)
    out = []
    for s, value in enumerate(c, start=1):
        first_offsets = n * n + 1 if s == 1 else 1
        classical_offsets = 2 * (n + 1 - s)
        out.append(value - first_offsets + classical_offsets)
    return tuple(out)


def rr2_record(a: Partition) -> BijectionRecord:
    image = rr2_forward(a)
    return BijectionRecord(
        source=a.parts,
        image=image,
        term_index=len(a.parts),
        source_weight=a.weight,
        image_weight=sum(image),
    )


def rr2_inverse(b: Sequence[int], n: int | None = None) -> Partition:
    """Invert the map: k_s = floor((b_s - 1 - n^2*d(1,s) - pi_c(s) + pi_1(s))/2)
    recovers floor(a_s/5), then a_s = b_s + 3k_s + 1 - n^2*d(1,s) - pi_c(s)
    + pi_1(s).  Input must satisfy the classical gap-2 chain."""
    v = tuple(b)
    if n is None:
        n = len(v)
    elif n != len(v):
        raise ValueError(f"term index {n} does not match {len(v)} slots")
    if n:
        chain = ChainConstraint((GapBound(2),) * (n - 1), GapBound(2))
        violation = chain_violation(v, chain)
        if violation is not None:
            raise ValueError(f"input violates the gap-2 chain: {violation}")
    parts = []
    for s, value in enumerate(v, start=1):
        delta = n * n if s == 1 else 0
        pi_first = n * n + 1 if s == 1 else 1
        pi_classical = 2 * (n + 1 - s)
        k = (value - 1 - delta - pi_classical + pi_first) // 2
        parts.append(value + 3 * k + 1 - delta - pi_classical + pi_first)
    return Partition(tuple(parts))


def weight_relation_check(record: BijectionRecord) -> bool:
    """Exact check of N_out = N_in + n^2 - sum(3*floor(a_s/5) + 1) for a
    record produced by rr2_record."""
    shift = sum(3 * (p // 5) + 1 for p in record.source)
    return record.image_weight == record.source_weight + record.term_index**2 - shift


def glaisher_forward_steps(p: Partition, modulus: int) -> list[Partition]:
    """Iterate "replace every part divisible by M with M copies of part/M"
    until no part is divisible by M; returns all intermediate partitions,
    starting with the input.  Each pass rewrites every divisible part at once.
    """
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    steps = [p]
    current = p
    while not all(part % modulus for part in current.parts):
        expanded: list[int] = []
        for part in current.parts:
            if part % modulus == 0:
                expanded.extend([part // modulus] * modulus)
            else:
                expanded.append(part)
        current = Partition(tuple(sorted(expanded, reverse=True)))
        steps.append(current)
    return steps


def glaisher_forward(p: Partition, modulus: int) -> Partition:
    """Fixed point of the divide-by-M expansion; preserves weight and lands in
    the no-part-divisible-by-M set."""
    return glaisher_forward_steps(p, modulus)[-1]


def glaisher_inverse_steps(p: Partition, modulus: int) -> list[Partition]:
    """Iterate "merge every group of M equal parts into one part of M times
    the value" until every part occurs fewer than M times; returns all
    intermediate partitions, starting with the input."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    steps = [p]
    current = p
    while True:
        counts = Counter(current.parts)
        if all(c < modulus for c in counts.values()):
            return steps
        merged: list[int] = []
        for value, count in counts.items():
            groups, rest = divmod(count, modulus)
            merged.extend([value * modulus] * groups)
            merged.extend([value] * rest)
        current = Partition(tuple(sorted(merged, reverse=True)))
        steps.append(current)


def glaisher_inverse(p: Partition, modulus: int) -> Partition:
    """Fixed point of the merge-M-copies contraction; inverts the forward map
    on partitions with no part divisible by M."""
    return glaisher_inverse_steps(p, modulus)[-1]


@dataclass(frozen=True)
class CertificationReport:
    """Outcome of certifying a map over a finite domain."""

    domain_size: int
    image_size: int
    target_size: int | None
    failure: str | None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def render_text(self) -> str:
        target = "-" if self.target_size is None else str(self.target_size)
        status = "pass" if self.ok else f"FAIL: {self.failure}"
        return (
            f"domain={self.domain_size} image={self.image_size} "
            f"target={target} {status}"
        )

    def machine(self) -> str:
        return json.dumps(
            {
                "domain_size": self.domain_size,
                "image_size": self.image_size,
                "target_size": self.target_size,
                "ok": self.ok,
                "failure": self.failure,
            },
            sort_keys=True,
            separators=(",", ":"),
        )


def certify_bijection(
    domain: Iterable[Any],
    forward: Callable[[Any], Any],
    inverse: Callable[[Any], Any],
    target_check: Callable[[Any], bool],
    target: Iterable[Any] | None = None,
) -> CertificationReport:
    """Verify, pointwise over a finite domain, that ``forward`` maps into the
    target set, that ``inverse`` undoes it, and that it is injective; when the
    target set is supplied, also that the image is exactly the target.
    Stops at the first counterexample."""
    items = list(domain)
    image: set[Any] = set()
    failure = None
    for x in items:
        y = forward(x)
        if not target_check(y):
            failure = f"image of {x} fails the target predicate: {y}"
            break
        back = inverse(y)
        if back != x:
            failure = f"inverse round trip failed for {x}: got {back} via {y}"
            break
        if y in image:
            failure = f"not injective: {y} reached twice"
            break
        image.add(y)
    target_size = None
    if target is not None:
        target_set = set(target)
        target_size = len(target_set)
        if failure is None and image != target_set:
            missed = sorted(target_set - image, key=str)[:1]
            extra = sorted(image - target_set, key=str)[:1]
            failure = (
                f"image differs from target ({len(image)} vs {target_size}); "
                f"missing {missed or '-'}, extraneous {extra or '-'}"
            )
    return CertificationReport(
        domain_size=len(items),
        image_size=len(image),
        target_size=target_size,
        failure=failure,
    )
