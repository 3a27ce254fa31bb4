"""Offset profiles: families n -> (slot count, offsets pi(n,1..u)) stored as
data, the conversion into chain constraints, and the shipped catalog.

A profile adds the offset pi(n,s) to the s-th entry of a generic weakly
decreasing vector, turning the plain family of at-most-u-part partitions into
a gap-constrained one.  Profiles are kept as piecewise rule strings in a JSON
catalog so the shipped interpretations are auditable and users can add their
own without touching code.
"""

import ast
import json
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .partitions import ChainConstraint, GapBound, enumerate_chain
from .series import ResidueClass, SumTerminationError, TruncatedSeries, sum_side_standard

__all__ = [
    "UnknownNameError",
    "parity",
    "evaluate_rule",
    "PiecewiseCase",
    "ProfileBranch",
    "ProfileFamily",
    "ProfileValidation",
    "CatalogEntry",
    "Catalog",
    "loads_catalog",
    "load_catalog",
    "dump_catalog",
    "default_catalog",
    "catalog_lookup",
    "catalog_list",
    "profile_to_chain",
    "profile_series",
    "profile_chain_counts",
    "validate_profile",
]

_SCAN_LIMIT = 10_000


class UnknownNameError(KeyError):
    """Lookup of a catalog name or alias that does not exist."""

    def __str__(self) -> str:
        return self.args[0] if self.args else "unknown name"


def parity(m: int) -> int:
    """1 for odd integers, 0 for even ones."""
    return m & 1


_ALLOWED_NODES = (
    ast.Expression,
    ast.BinOp,
    ast.UnaryOp,
    ast.BoolOp,
    ast.Compare,
    ast.Call,
    ast.Name,
    ast.Load,
    ast.Constant,
    ast.Add,
    ast.Sub,
    ast.Mult,
    ast.FloorDiv,
    ast.Mod,
    ast.Pow,
    ast.USub,
    ast.UAdd,
    ast.And,
    ast.Or,
    ast.Lt,
    ast.LtE,
    ast.Gt,
    ast.GtE,
    ast.Eq,
    ast.NotEq,
)
_ALLOWED_NAMES = frozenset({"n", "s", "parity"})


@lru_cache(maxsize=None)
def _compiled_rule(expr: str):
    """Validate a rule against the whitelist and compile it once."""
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"invalid rule {expr!r}: {exc.msg}") from None
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise ValueError(
                f"rule {expr!r} uses disallowed syntax: {type(node).__name__}"
            )
        if isinstance(node, ast.Name) and node.id not in _ALLOWED_NAMES:
            raise ValueError(f"rule {expr!r} references unknown name {node.id!r}")
        if isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id == "parity"):
                raise ValueError(f"rule {expr!r} may only call parity()")
            if node.keywords or len(node.args) != 1:
                raise ValueError(f"rule {expr!r}: parity() takes one argument")
        if isinstance(node, ast.Constant) and not isinstance(node.value, int):
            raise ValueError(f"rule {expr!r} uses a non-integer constant")
    return compile(tree, f"<rule {expr!r}>", "eval")


def evaluate_rule(expr: str, **variables: int):
    """Evaluate a whitelisted integer rule with the given variable bindings."""
    env = {"parity": parity, **variables}
    return eval(_compiled_rule(expr), {"__builtins__": {}}, env)


@dataclass(frozen=True)
class PiecewiseCase:
    """One case of a piecewise offset rule; ``when`` is a boolean expression in
    n and s, or the literal "otherwise" for the final catch-all."""

    when: str
    value: str


@dataclass(frozen=True)
class ProfileBranch:
    """One indexed sub-family: slot count, declared minimal weight, and the
    piecewise offsets, each as rules in the branch index n."""

    parity_label: str  # "all", "even" or "odd"
    n_min: int
    slots: str
    min_weight: str
    offsets: tuple[PiecewiseCase, ...]

    def slot_count(self, n: int) -> int:
        u = evaluate_rule(self.slots, n=n)
        if u < 0:
            raise ValueError(f"slot rule {self.slots!r} is negative at n={n}")
        return u

    def declared_weight(self, n: int) -> int:
        return evaluate_rule(self.min_weight, n=n)

    def offset(self, n: int, s: int) -> int:
        for case in self.offsets:
            if case.when == "otherwise" or evaluate_rule(case.when, n=n, s=s):
                return evaluate_rule(case.value, n=n, s=s)
        raise ValueError(f"no offset case matched n={n}, s={s}")

    def offsets_at(self, n: int) -> tuple[int, ...]:
        return tuple(self.offset(n, s) for s in range(1, self.slot_count(n) + 1))


@dataclass(frozen=True)
class ProfileFamily:
    name: str
    branches: tuple[ProfileBranch, ...]

    def resolve(self, index: int) -> tuple[ProfileBranch, int]:
        """Map a family index to (branch, branch-local n).

        Single-branch families are indexed by the branch's own n.  Two-branch
        families are indexed by part count: the even branch covers even
        indexes with n = index/2, the odd branch covers odd indexes with
        n = (index+1)/2.
        """
        if len(self.branches) == 1:
            branch = self.branches[0]
            if index < branch.n_min:
                raise ValueError(
                    f"index {index} below the domain of profile {self.name}"
                )
            return branch, index
        label = "even" if index % 2 == 0 else "odd"
        for branch in self.branches:
            if branch.parity_label == label:
                n = index // 2 if label == "even" else (index + 1) // 2
                if n < branch.n_min:
                    raise ValueError(
                        f"index {index} below the domain of profile {self.name}"
                    )
                return branch, n
        raise ValueError(f"profile {self.name} has no branch for index {index}")

    def offsets_at(self, index: int) -> tuple[int, ...]:
        branch, n = self.resolve(index)
        return branch.offsets_at(n)

    def slot_count(self, index: int) -> int:
        branch, n = self.resolve(index)
        return branch.slot_count(n)


@dataclass(frozen=True)
class ProfileValidation:
    profile: str
    checked_to: int
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class CatalogEntry:
    profile: ProfileFamily
    product: ResidueClass | None
    source: str
    aliases: tuple[str, ...] = ()

    @property
    def name(self) -> str:
        return self.profile.name


class Catalog:
    """Ordered, immutable collection of entries addressable by name or alias."""

    def __init__(self, entries: Iterable[CatalogEntry]):
        self._entries = tuple(entries)
        self._by_name: dict[str, CatalogEntry] = {}
        for entry in self._entries:
            for key in (entry.name, *entry.aliases):
                if key in self._by_name:
                    raise ValueError(f"duplicate catalog name {key!r}")
                self._by_name[key] = entry

    def entries(self) -> tuple[CatalogEntry, ...]:
        return self._entries

    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def lookup(self, name: str) -> CatalogEntry:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownNameError(f"unknown catalog entry {name!r}") from None


def _branch_from_json(data: dict) -> ProfileBranch:
    label = data["parity"]
    if label not in ("all", "even", "odd"):
        raise ValueError(f"invalid branch parity {label!r}")
    n_min = int(data["n_min"])
    if n_min < 0:
        raise ValueError("n_min must be nonnegative")
    cases = tuple(PiecewiseCase(c["when"], c["value"]) for c in data["offsets"])
    if not cases or cases[-1].when != "otherwise":
        raise ValueError("the last offset case must be 'otherwise'")
    for case in cases[:-1]:
        if case.when == "otherwise":
            raise ValueError("'otherwise' is only allowed as the final case")
        _compiled_rule(case.when)
    for case in cases:
        _compiled_rule(case.value)
    _compiled_rule(data["slots"])
    _compiled_rule(data["min_weight"])
    return ProfileBranch(label, n_min, data["slots"], data["min_weight"], cases)


def _entry_from_json(data: dict) -> CatalogEntry:
    branches = tuple(_branch_from_json(b) for b in data["branches"])
    if len(branches) == 1:
        if branches[0].parity_label != "all":
            raise ValueError("a single branch must have parity 'all'")
    elif len(branches) == 2:
        if {b.parity_label for b in branches} != {"even", "odd"}:
            raise ValueError("two branches must be one 'even' and one 'odd'")
    else:
        raise ValueError("a profile has one or two branches")
    product = None
    if data.get("modulus") is not None:
        product = ResidueClass(int(data["modulus"]), frozenset(data["residues"]))
    return CatalogEntry(
        profile=ProfileFamily(data["name"], branches),
        product=product,
        source=data.get("source", ""),
        aliases=tuple(data.get("aliases", ())),
    )


def loads_catalog(text: str) -> Catalog:
    payload = json.loads(text)
    return Catalog(_entry_from_json(e) for e in payload["entries"])


def load_catalog(path: str | Path) -> Catalog:
    return loads_catalog(Path(path).read_text(encoding="utf-8"))


def dump_catalog(catalog: Catalog) -> str:
    """Canonical JSON rendering; loading and re-dumping a shipped file is
    byte-identical."""
    entries = []
    for entry in catalog.entries():
        entries.append(
            {
                "name": entry.name,
                "aliases": list(entry.aliases),
                "source": entry.source,
                "modulus": entry.product.modulus if entry.product else None,
                "residues": (
                    list(entry.product.sorted_residues()) if entry.product else None
                ),
                "branches": [
                    {
                        "parity": b.parity_label,
                        "n_min": b.n_min,
                        "slots": b.slots,
                        "min_weight": b.min_weight,
                        "offsets": [
                            {"when": c.when, "value": c.value} for c in b.offsets
                        ],
                    }
                    for b in entry.profile.branches
                ],
            }
        )
    return json.dumps({"entries": entries}, indent=2) + "\n"


@lru_cache(maxsize=1)
def default_catalog() -> Catalog:
    text = resources.files(__package__).joinpath("catalog.json").read_text("utf-8")
    return loads_catalog(text)


def catalog_lookup(name: str, catalog: Catalog | None = None) -> CatalogEntry:
    return (catalog or default_catalog()).lookup(name)


def catalog_list(catalog: Catalog | None = None) -> tuple[CatalogEntry, ...]:
    return (catalog or default_catalog()).entries()


def profile_to_chain(family: ProfileFamily, index: int) -> ChainConstraint:
    """Chain constraint induced by the offsets at one family index: lower gap
    bounds are adjacent offset differences, the terminal bound is the last
    offset.  Rejects offset rows that increase (negative gap) or go negative.
    """
    offsets = family.offsets_at(index)
    if not offsets:
        raise ValueError(f"profile {family.name} has no slots at index {index}")
    for s, value in enumerate(offsets, start=1):
        if value < 0:
            raise ValueError(
                f"profile {family.name}: offset {value} at (index={index}, s={s}) "
                "is negative"
            )
    for s in range(len(offsets) - 1):
        if offsets[s] < offsets[s + 1]:
            raise ValueError(
                f"profile {family.name}: offsets increase at (index={index}, "
                f"s={s + 1} -> {s + 2})"
            )
    gaps = tuple(
        GapBound(offsets[s] - offsets[s + 1]) for s in range(len(offsets) - 1)
    )
    return ChainConstraint(gaps, GapBound(offsets[-1]))


def profile_series(family: ProfileFamily, order: int) -> TruncatedSeries:
    """Sum over all branch terms of q^{min_weight(n)}/((1-q)...(1-q^{slots(n)})).

    Identical for every profile sharing the same slot-count and weight rules;
    the offsets do not enter.
    """
    total: TruncatedSeries | None = None
    for branch in family.branches:
        part = sum_side_standard(
            branch.declared_weight, branch.slot_count, order, start=branch.n_min
        )
        total = part if total is None else total + part
    assert total is not None
    return total


def profile_chain_counts(family: ProfileFamily, max_weight: int) -> list[int]:
    """Counts, for every weight 0..max_weight, of chain vectors over all branch
    terms of the family.  This is the enumeration route: it never touches the
    series algebra."""
    counts = [0] * (max_weight + 1)
    for branch in family.branches:
        n = branch.n_min
        previous = None
        scanned = 0
        while True:
            if scanned > _SCAN_LIMIT:
                raise SumTerminationError(
                    f"profile {family.name}: weights stayed below {max_weight} "
                    f"for more than {_SCAN_LIMIT} terms"
                )
            w = branch.declared_weight(n)
            if previous is not None and w < previous:
                raise ValueError(
                    f"profile {family.name}: declared weights decrease at n={n}"
                )
            if w > max_weight:
                break
            previous = w
            u = branch.slot_count(n)
            if u == 0:
                counts[w] += 1
            else:
                offsets = branch.offsets_at(n)
                gaps = tuple(
                    GapBound(offsets[s] - offsets[s + 1]) for s in range(u - 1)
                )
                chain = ChainConstraint(gaps, GapBound(offsets[-1]))
                for weight in range(w, max_weight + 1):
                    counts[weight] += len(enumerate_chain(chain, weight))
            n += 1
            scanned += 1
    return counts


def validate_profile(family: ProfileFamily, n_max: int) -> ProfileValidation:
    """Check nonnegativity, weak decrease in s, and that the offsets sum to the
    declared weight, for every branch index up to ``n_max``."""
    failures: list[str] = []
    for branch in family.branches:
        for n in range(branch.n_min, n_max + 1):
            try:
                offsets = branch.offsets_at(n)
            except ValueError as exc:
                failures.append(f"{family.name}[{branch.parity_label}] n={n}: {exc}")
                continue
            for s, value in enumerate(offsets, start=1):
                if value < 0:
                    failures.append(
                        f"{family.name}[{branch.parity_label}] n={n} s={s}: "
                        f"negative offset {value}"
                    )
                    break
                if s > 1 and offsets[s - 2] < value:
                    failures.append(
                        f"{family.name}[{branch.parity_label}] n={n} s={s - 1}: "
                        f"offsets increase from {offsets[s - 2]} to {value}"
                    )
                    break
            declared = branch.declared_weight(n)
            total = sum(offsets)
            if total != declared:
                failures.append(
                    f"{family.name}[{branch.parity_label}] n={n}: offsets sum to "
                    f"{total}, declared weight is {declared}"
                )
    return ProfileValidation(family.name, n_max, tuple(failures))
