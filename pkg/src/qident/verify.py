"""End-to-end identity verification.

Three kinds of check, deliberately routed through independent machinery:
analytic (series algebra on both sides), combinatorial (chain enumeration
against series coefficients), and equinumerosity (several interpretations of
one sum side counted against each other and against the product side).  The
divide-by-M family additionally gets its bijection certified, its conjugate
chain characterization checked, and its term recurrence compared with the
closed form.
"""

import json
import time
from dataclasses import dataclass, field

from .bijections import certify_bijection, glaisher_forward, glaisher_inverse
from .partitions import (
    ChainConstraint,
    GapBound,
    conjugate,
    enumerate_chain,
    enumerate_partitions_with_parts,
    no_part_divisible,
    partitions_no_part_divisible,
    partitions_repetition_bounded,
)
from .profiles import (
    Catalog,
    default_catalog,
    profile_chain_counts,
    profile_series,
)
from .series import (
    ResidueClass,
    TruncatedSeries,
    alpha_closed_form,
    alpha_recurrence,
    euler_distinct_sum,
    product_side,
    series_one,
    sum_side_glaisher,
    sum_side_standard,
)

__all__ = [
    "IdentityDescriptor",
    "VerificationReport",
    "SuiteSummary",
    "built_in_identities",
    "equinumerous_groups",
    "verify_analytic",
    "verify_combinatorial",
    "verify_equinumerosity",
    "glaisher_analytic_report",
    "glaisher_bijection_report",
    "glaisher_conjugate_report",
    "glaisher_alpha_report",
    "euler_forms_report",
    "verify_glaisher_family",
    "run_suite",
]


@dataclass(frozen=True)
class IdentityDescriptor:
    """A product side paired with a sum side and its interpretations.

    The sum side is either the term family of a cataloged profile or the
    divide-by-M form selected by ``glaisher_modulus``.
    """

    name: str
    product: ResidueClass | None
    sum_profile: str | None = None
    glaisher_modulus: int | None = None
    interpretations: tuple[str, ...] = ()
    aliases: tuple[str, ...] = ()


@dataclass(frozen=True)
class VerificationReport:
    """Result of one check; mismatches carry the smallest offending exponent
    (or weight) and both exact values."""

    identity: str
    mode: str
    bound: int
    outcome: str  # "pass" | "mismatch" | "error"
    subject: str = ""
    exponent: int | None = None
    lhs: int | None = None
    rhs: int | None = None
    note: str = ""
    elapsed: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"

    def machine(self) -> str:
        """One-line JSON record; wall time is excluded so output is
        byte-identical across runs."""
        payload: dict = {
            "identity": self.identity,
            "mode": self.mode,
            "bound": self.bound,
            "outcome": self.outcome,
        }
        if self.subject:
            payload["subject"] = self.subject
        if self.exponent is not None:
            payload["exponent"] = self.exponent
        if self.lhs is not None:
            payload["lhs"] = self.lhs
        if self.rhs is not None:
            payload["rhs"] = self.rhs
        if self.note:
            payload["note"] = self.note
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    def describe(self) -> str:
        if self.outcome == "pass":
            return "pass"
        if self.outcome == "mismatch":
            where = f" at q^{self.exponent}" if self.exponent is not None else ""
            values = (
                f": {self.lhs} != {self.rhs}"
                if self.lhs is not None or self.rhs is not None
                else ""
            )
            note = f" ({self.note})" if self.note else ""
            return f"mismatch{where}{values}{note}"
        return f"error: {self.note}"


def _report(
    identity: str,
    mode: str,
    bound: int,
    started: float,
    *,
    subject: str = "",
    exponent: int | None = None,
    lhs: int | None = None,
    rhs: int | None = None,
    note: str = "",
) -> VerificationReport:
    outcome = "pass" if exponent is None and not note else "mismatch"
    return VerificationReport(
        identity=identity,
        mode=mode,
        bound=bound,
        outcome=outcome,
        subject=subject,
        exponent=exponent,
        lhs=lhs,
        rhs=rhs,
        note=note if outcome == "mismatch" else "",
        elapsed=time.perf_counter() - started,
    )


def _sum_series(
    descriptor: IdentityDescriptor, order: int, catalog: Catalog
) -> TruncatedSeries:
    if descriptor.glaisher_modulus is not None:
        return sum_side_glaisher(descriptor.glaisher_modulus, order)
    if descriptor.sum_profile is None:
        raise ValueError(f"identity {descriptor.name} has no sum side")
    entry = catalog.lookup(descriptor.sum_profile)
    return profile_series(entry.profile, order)


def verify_analytic(
    descriptor: IdentityDescriptor,
    order: int,
    catalog: Catalog | None = None,
) -> VerificationReport:
    """Compare the product side and the sum side coefficientwise below
    ``order``; both sides are computed by series algebra alone."""
    catalog = catalog or default_catalog()
    started = time.perf_counter()
    if descriptor.product is None:
        return VerificationReport(
            descriptor.name,
            "analytic",
            order,
            "error",
            note="identity has no product side",
            elapsed=time.perf_counter() - started,
        )
    lhs = product_side(descriptor.product, order)
    rhs = _sum_series(descriptor, order, catalog)
    e = lhs.first_difference(rhs, order)
    if e is None:
        return _report(descriptor.name, "analytic", order, started)
    return _report(
        descriptor.name,
        "analytic",
        order,
        started,
        exponent=e,
        lhs=lhs.coefficient(e),
        rhs=rhs.coefficient(e),
        note="product vs sum side",
    )


def verify_combinatorial(
    descriptor: IdentityDescriptor,
    profile_name: str,
    max_weight: int,
    catalog: Catalog | None = None,
) -> VerificationReport:
    """Chain-enumeration counts of one interpretation against the sum-side
    series coefficients, and against the product-side series when the identity
    has one.  Enumeration and series are independent code paths."""
    catalog = catalog or default_catalog()
    started = time.perf_counter()
    if profile_name not in descriptor.interpretations:
        raise ValueError(
            f"profile {profile_name!r} is not an interpretation of "
            f"{descriptor.name}"
        )
    entry = catalog.lookup(profile_name)
    counts = profile_chain_counts(entry.profile, max_weight)
    series = [("sum side", _sum_series(descriptor, max_weight + 1, catalog))]
    if descriptor.product is not None:
        series.append(("product side", product_side(descriptor.product, max_weight + 1)))
    for label, s in series:
        for weight in range(max_weight + 1):
            if counts[weight] != s.coefficient(weight):
                return _report(
                    descriptor.name,
                    "combinatorial",
                    max_weight,
                    started,
                    subject=profile_name,
                    exponent=weight,
                    lhs=counts[weight],
                    rhs=s.coefficient(weight),
                    note=f"enumeration vs {label}",
                )
    return _report(
        descriptor.name, "combinatorial", max_weight, started, subject=profile_name
    )


def verify_equinumerosity(
    profile_names: tuple[str, ...] | list[str],
    max_weight: int,
    *,
    catalog: Catalog | None = None,
    identity: str | None = None,
) -> VerificationReport:
    """Count agreement across interpretations sharing one term family, checked
    against each other, against product-side enumeration, and against the
    series coefficients."""
    catalog = catalog or default_catalog()
    started = time.perf_counter()
    name = identity or "+".join(profile_names)
    entries = [catalog.lookup(p) for p in profile_names]
    products = {e.product for e in entries}
    if len(products) != 1:
        return VerificationReport(
            name,
            "equinumerosity",
            max_weight,
            "error",
            note="interpretations disagree on the product side",
            elapsed=time.perf_counter() - started,
        )
    product = entries[0].product
    sequences: list[tuple[str, list[int]]] = [
        (e.name, profile_chain_counts(e.profile, max_weight)) for e in entries
    ]
    if product is not None:
        sequences.append(
            (
                "product enumeration",
                [
                    len(enumerate_partitions_with_parts(product, w))
                    for w in range(max_weight + 1)
                ],
            )
        )
        series = product_side(product, max_weight + 1)
        sequences.append(("product series", series.to_list()))
    else:
        series = profile_series(entries[0].profile, max_weight + 1)
        sequences.append(("sum series", series.to_list()))
    ref_name, reference = sequences[0]
    for other_name, other in sequences[1:]:
        for weight in range(max_weight + 1):
            if reference[weight] != other[weight]:
                return _report(
                    name,
                    "equinumerosity",
                    max_weight,
                    started,
                    exponent=weight,
                    lhs=reference[weight],
                    rhs=other[weight],
                    note=f"{ref_name} vs {other_name}",
                )
    return _report(name, "equinumerosity", max_weight, started)


def glaisher_analytic_report(modulus: int, order: int) -> VerificationReport:
    name = f"glaisher-{modulus}"
    started = time.perf_counter()
    lhs = product_side(ResidueClass.nonzero(modulus), order)
    rhs = sum_side_glaisher(modulus, order)
    e = lhs.first_difference(rhs, order)
    if e is None:
        return _report(name, "analytic", order, started)
    return _report(
        name,
        "analytic",
        order,
        started,
        exponent=e,
        lhs=lhs.coefficient(e),
        rhs=rhs.coefficient(e),
        note="product vs sum side",
    )


def euler_forms_report(order: int) -> VerificationReport:
    """At modulus 2, the odd-parts product equals three sum expressions: the
    divide-by-2 form, the triangular-exponent family, and the distinct-parts
    product form.  All four are compared pairwise to the product."""
    name = "glaisher-2"
    started = time.perf_counter()
    prod = product_side(ResidueClass(2, frozenset({1})), order)
    forms = [
        ("divide-by-2 sum", sum_side_glaisher(2, order)),
        (
            "triangular sum",
            sum_side_standard(lambda n: (n * n + n) // 2, lambda n: n, order),
        ),
        ("distinct-parts sum", euler_distinct_sum(order)),
    ]
    for label, s in forms:
        e = prod.first_difference(s, order)
        if e is not None:
            return _report(
                name,
                "forms",
                order,
                started,
                exponent=e,
                lhs=prod.coefficient(e),
                rhs=s.coefficient(e),
                note=f"odd-parts product vs {label}",
            )
    return _report(name, "forms", order, started)


def glaisher_bijection_report(modulus: int, max_weight: int) -> VerificationReport:
    """Certify the divide-by-M map between bounded-repetition and
    no-multiple-part partitions for every weight up to ``max_weight``."""
    name = f"glaisher-{modulus}"
    started = time.perf_counter()
    for weight in range(max_weight + 1):
        domain = partitions_repetition_bounded(weight, modulus)
        target = partitions_no_part_divisible(weight, modulus)
        cert = certify_bijection(
            domain,
            lambda p: glaisher_forward(p, modulus),
            lambda p: glaisher_inverse(p, modulus),
            lambda p: no_part_divisible(p, modulus),
            target=target,
        )
        if not cert.ok:
            return _report(
                name,
                "bijection",
                max_weight,
                started,
                exponent=weight,
                lhs=cert.domain_size,
                rhs=cert.target_size,
                note=cert.failure or "certification failed",
            )
    return _report(name, "bijection", max_weight, started)


def glaisher_conjugate_report(modulus: int, max_weight: int) -> VerificationReport:
    """Conjugates of bounded-repetition partitions must coincide with the
    vectors whose adjacent differences lie in [0, M-1] and whose last entry
    lies in [1, M-1]."""
    name = f"glaisher-{modulus}"
    started = time.perf_counter()
    for weight in range(1, max_weight + 1):
        conjugates = {
            conjugate(p).parts
            for p in partitions_repetition_bounded(weight, modulus)
        }
        chain_vectors: set[tuple[int, ...]] = set()
        for slots in range(1, weight + 1):
            chain = ChainConstraint.uniform(
                slots, GapBound(0, modulus - 1), GapBound(1, modulus - 1)
            )
            chain_vectors.update(enumerate_chain(chain, weight))
        if conjugates != chain_vectors:
            return _report(
                name,
                "conjugate",
                max_weight,
                started,
                exponent=weight,
                lhs=len(conjugates),
                rhs=len(chain_vectors),
                note="conjugate set differs from bounded-gap chain set",
            )
    return _report(name, "conjugate", max_weight, started)


def glaisher_alpha_report(modulus: int, n_max: int, order: int) -> VerificationReport:
    """Recurrence-built terms must equal the closed form for every index up to
    ``n_max`` at the given order."""
    name = f"glaisher-{modulus}"
    started = time.perf_counter()
    terms = [series_one(order)]
    for n in range(1, n_max + 1):
        recurred = alpha_recurrence(modulus, n, terms, order)
        closed = alpha_closed_form(modulus, n, order)
        e = recurred.first_difference(closed, order)
        if e is not None:
            return _report(
                name,
                "alpha",
                order,
                started,
                exponent=e,
                lhs=recurred.coefficient(e),
                rhs=closed.coefficient(e),
                note=f"recurrence vs closed form at term {n}",
            )
        terms.append(recurred)
    return _report(name, "alpha", order, started)


def verify_glaisher_family(
    modulus_max: int,
    order: int,
    max_weight: int,
    *,
    modulus_min: int = 2,
    alpha_terms: int = 10,
) -> list[VerificationReport]:
    """The full battery for each modulus: analytic identity, bijection
    certification, conjugate chain characterization, and term-recurrence
    agreement; plus the extra sum forms at modulus 2."""
    reports = []
    for modulus in range(modulus_min, modulus_max + 1):
        reports.append(glaisher_analytic_report(modulus, order))
        reports.append(glaisher_bijection_report(modulus, max_weight))
        reports.append(glaisher_conjugate_report(modulus, min(max_weight, 20)))
        reports.append(glaisher_alpha_report(modulus, alpha_terms, order))
        if modulus == 2:
            reports.append(euler_forms_report(order))
    return reports


_APPENDIX_ALIASES = {
    "capparelli-1-6": "appendix-b",
    "capparelli-1-7": "appendix-c",
    "hirschhorn-1": "appendix-d",
    "hirschhorn-2": "appendix-e",
    "hirschhorn-3": "appendix-f",
    "hirschhorn-4": "appendix-g",
    "subbarao-agarwal-1-4": "appendix-h",
    "subbarao-agarwal-1-5": "appendix-i",
    "subbarao-agarwal-1-6": "appendix-j",
    "subbarao-2-1": "appendix-k",
    "subbarao-2-2": "appendix-l",
    "subbarao-2-3": "appendix-m",
    "subbarao-2-4": "appendix-n",
}

_GLAISHER_RANGE = range(2, 8)

# interpretations that share both the product side and the term family
_GROUPS = (
    ("rr2-interpretations", ("P2", "P3", "P4", "P5")),
    ("euler-interpretations", ("euler-staircase", "euler-layers")),
    (
        "example-family-interpretations",
        ("example-alternating", "example-exact-parts", "example-atmost-parts"),
    ),
    ("capparelli-1-6+subbarao-agarwal-1-4", ("capparelli-1-6", "subbarao-agarwal-1-4")),
    ("hirschhorn-1+subbarao-2-2", ("hirschhorn-1", "subbarao-2-2")),
    ("hirschhorn-2+subbarao-2-1", ("hirschhorn-2", "subbarao-2-1")),
    ("hirschhorn-3+subbarao-2-4", ("hirschhorn-3", "subbarao-2-4")),
    ("hirschhorn-4+subbarao-2-3", ("hirschhorn-4", "subbarao-2-3")),
)


def built_in_identities(catalog: Catalog | None = None) -> tuple[IdentityDescriptor, ...]:
    """Identity descriptors derived from the catalog plus the divide-by-M
    family.  Catalog entries not covered by a named group each become their
    own identity."""
    catalog = catalog or default_catalog()
    out: list[IdentityDescriptor] = []
    covered: set[str] = set()

    def add(descriptor: IdentityDescriptor) -> None:
        out.append(descriptor)
        covered.update(descriptor.interpretations)

    if all(name in catalog for name in ("P2", "P3", "P4", "P5")):
        add(
            IdentityDescriptor(
                name="rr2",
                product=catalog.lookup("P2").product,
                sum_profile="P2",
                interpretations=("P2", "P3", "P4", "P5"),
            )
        )
    if all(name in catalog for name in ("euler-staircase", "euler-layers")):
        add(
            IdentityDescriptor(
                name="euler",
                product=catalog.lookup("euler-staircase").product,
                sum_profile="euler-staircase",
                interpretations=("euler-staircase", "euler-layers"),
                aliases=("appendix-a",),
            )
        )
    example = ("example-alternating", "example-exact-parts", "example-atmost-parts")
    if all(name in catalog for name in example):
        add(
            IdentityDescriptor(
                name="example-family",
                product=None,
                sum_profile="example-alternating",
                interpretations=example,
            )
        )
    for entry in catalog.entries():
        if entry.name in covered:
            continue
        alias = _APPENDIX_ALIASES.get(entry.name)
        add(
            IdentityDescriptor(
                name=entry.name,
                product=entry.product,
                sum_profile=entry.name,
                interpretations=(entry.name,),
                aliases=(alias,) if alias else (),
            )
        )
    for modulus in _GLAISHER_RANGE:
        out.append(
            IdentityDescriptor(
                name=f"glaisher-{modulus}",
                product=ResidueClass.nonzero(modulus),
                glaisher_modulus=modulus,
            )
        )
    return tuple(out)


def equinumerous_groups(
    catalog: Catalog | None = None,
) -> tuple[tuple[str, tuple[str, ...]], ...]:
    catalog = catalog or default_catalog()
    return tuple(
        (name, members)
        for name, members in _GROUPS
        if all(member in catalog for member in members)
    )


@dataclass(frozen=True)
class SuiteSummary:
    reports: tuple[VerificationReport, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    @property
    def has_mismatch(self) -> bool:
        return any(r.outcome == "mismatch" for r in self.reports)

    @property
    def has_error(self) -> bool:
        return any(r.outcome == "error" for r in self.reports)

    def machine_lines(self) -> list[str]:
        return [r.machine() for r in self.reports]

    def render_table(self, *, with_time: bool = True) -> str:
        headers = ["identity", "mode", "subject", "bound", "result"]
        if with_time:
            headers.append("time")
        rows = []
        for r in self.reports:
            row = [r.identity, r.mode, r.subject or "-", str(r.bound), r.describe()]
            if with_time:
                row.append(f"{r.elapsed:.2f}s")
            rows.append(row)
        widths = [
            max(len(headers[i]), *(len(row[i]) for row in rows)) if rows else len(headers[i])
            for i in range(len(headers))
        ]
        lines = [
            "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
            "  ".join("-" * w for w in widths),
        ]
        for row in rows:
            lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
        good = sum(1 for r in self.reports if r.passed)
        lines.append("")
        lines.append(f"{good}/{len(self.reports)} checks passed")
        return "\n".join(lines)


def run_suite(
    names: list[str] | None = None,
    order: int = 60,
    max_weight: int = 25,
    catalog: Catalog | None = None,
    *,
    alpha_terms: int = 10,
) -> SuiteSummary:
    """Run every applicable check for the requested identities (None or "all"
    selects everything; an empty list selects nothing).  Unknown names become
    error rows rather than aborting the rest of the suite."""
    catalog = catalog or default_catalog()
    identities = built_in_identities(catalog)
    groups = equinumerous_groups(catalog)
    by_key: dict[str, IdentityDescriptor] = {}
    for descriptor in identities:
        for key in (descriptor.name, *descriptor.aliases):
            by_key.setdefault(key, descriptor)
    group_by_name = dict(groups)

    want_all = names is None or "all" in names
    selected: list[IdentityDescriptor] = []
    selected_groups: list[tuple[str, tuple[str, ...]]] = []
    reports: list[VerificationReport] = []
    if want_all:
        selected = list(identities)
        selected_groups = list(groups)
    else:
        seen: set[str] = set()
        group_names: set[str] = set()
        for raw in names or ():
            if raw in by_key:
                descriptor = by_key[raw]
                if descriptor.name not in seen:
                    seen.add(descriptor.name)
                    selected.append(descriptor)
                    # a group wholly made of this identity's interpretations
                    # belongs to it
                    for group_name, members in groups:
                        if group_name not in group_names and set(members) <= set(
                            descriptor.interpretations
                        ):
                            group_names.add(group_name)
                            selected_groups.append((group_name, members))
            elif raw in group_by_name:
                if raw not in group_names:
                    group_names.add(raw)
                    selected_groups.append((raw, group_by_name[raw]))
            else:
                reports.append(
                    VerificationReport(
                        raw, "lookup", 0, "error", note="unknown identity"
                    )
                )

    for descriptor in selected:
        if descriptor.glaisher_modulus is not None:
            modulus = descriptor.glaisher_modulus
            reports.append(glaisher_analytic_report(modulus, order))
            reports.append(glaisher_bijection_report(modulus, max_weight))
            reports.append(glaisher_conjugate_report(modulus, min(max_weight, 20)))
            reports.append(glaisher_alpha_report(modulus, alpha_terms, order))
            if modulus == 2:
                reports.append(euler_forms_report(order))
            continue
        if descriptor.product is not None:
            reports.append(verify_analytic(descriptor, order, catalog))
        for profile_name in descriptor.interpretations:
            reports.append(
                verify_combinatorial(descriptor, profile_name, max_weight, catalog)
            )
    for group_name, members in selected_groups:
        reports.append(
            verify_equinumerosity(
                members, max_weight, catalog=catalog, identity=group_name
            )
        )
    reports.sort(key=lambda r: (r.identity, r.mode, r.subject, r.note))
    return SuiteSummary(tuple(reports))
