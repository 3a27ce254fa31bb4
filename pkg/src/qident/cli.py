"""Command-line surface: verify identities, enumerate chain vectors, apply
bijections, inspect the catalog, and dump series coefficients.

Exit codes: 0 success, 1 verification mismatch, 2 bad flags (argparse),
3 unknown name, 4 domain violation.
"""

import argparse
import json
import os
import sys
from collections.abc import Sequence

from .bijections import (
    glaisher_forward_steps,
    glaisher_inverse_steps,
    profile_bijection,
    rr2_forward,
    rr2_record,
    rr2_inverse,
    rr2_step_c,
)
from .partitions import Partition, enumerate_chain, parse_partition
from .profiles import (
    Catalog,
    UnknownNameError,
    default_catalog,
    dump_catalog,
    load_catalog,
    profile_series,
    profile_to_chain,
)
from .series import (
    ResidueClass,
    alpha_closed_form,
    euler_distinct_sum,
    product_side,
    sum_side_glaisher,
)
from .verify import run_suite, verify_glaisher_family, SuiteSummary

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_UNKNOWN_NAME = 3
EXIT_DOMAIN = 4

CATALOG_ENV = "QIDENT_CATALOG"


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _residue_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid residue list {text!r}") from None


def _resolve_catalog(args: argparse.Namespace) -> Catalog:
    path = getattr(args, "catalog", None) or os.environ.get(CATALOG_ENV)
    if path:
        return load_catalog(path)
    return default_catalog()


def _format_vector(vector: Sequence[int]) -> str:
    return "[" + ",".join(str(v) for v in vector) + "]"


def cmd_verify(args: argparse.Namespace) -> int:
    catalog = _resolve_catalog(args)
    if args.names and args.names[0] == "glaisher" and len(args.names) == 1:
        if args.modulus is None:
            print("error: verify glaisher requires --modulus", file=sys.stderr)
            return EXIT_USAGE
        reports = verify_glaisher_family(
            args.modulus,
            args.order,
            args.max_weight,
            modulus_min=args.modulus,
            alpha_terms=10,
        )
        summary = SuiteSummary(tuple(reports))
    else:
        summary = run_suite(
            args.names or ["all"], args.order, args.max_weight, catalog
        )
    if args.format == "machine":
        for line in summary.machine_lines():
            print(line)
    else:
        print(summary.render_table())
    if summary.has_mismatch:
        return EXIT_MISMATCH
    if summary.has_error:
        return EXIT_UNKNOWN_NAME
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    catalog = _resolve_catalog(args)
    entry = catalog.lookup(args.profile)
    chain = profile_to_chain(entry.profile, args.n)
    for vector in enumerate_chain(chain, args.weight):
        print(Partition.from_vector(vector))
    return EXIT_OK


def cmd_bijection(args: argparse.Namespace) -> int:
    catalog = _resolve_catalog(args)
    p = parse_partition(args.partition)
    if args.map in ("glaisher", "glaisher-inv"):
        if args.modulus is None:
            print("error: glaisher maps require --modulus", file=sys.stderr)
            return EXIT_USAGE
        stepper = (
            glaisher_forward_steps if args.map == "glaisher" else glaisher_inverse_steps
        )
        steps = stepper(p, args.modulus)
        if args.format == "machine":
            print(
                json.dumps(
                    {
                        "input": list(p.parts),
                        "steps": [list(s.parts) for s in steps[1:-1]],
                        "output": list(steps[-1].parts),
                    },
                    sort_keys=True,
                    separators=(",", ":"),
                )
            )
        else:
            print(f"input:  {steps[0]}")
            for step in steps[1:-1]:
                print(f"step:   {step}")
            print(f"output: {steps[-1]}")
    elif args.map == "rr2":
        c = rr2_step_c(p)
        b = rr2_forward(p)
        record = rr2_record(p)
        shift = sum(3 * (x // 5) + 1 for x in p.parts)
        if args.format == "machine":
            print(
                json.dumps(
                    {
                        "input": list(p.parts),
                        "c": list(c),
                        "output": list(b),
                        "input_weight": record.source_weight,
                        "output_weight": record.image_weight,
                    },
                    sort_keys=True,
                    separators=(",", ":"),
                )
            )
        else:
            n = len(p.parts)
            print(f"input:  {p}")
            print(f"c:      {_format_vector(c)}")
            print(f"output: {_format_vector(b)}")
            print(
                f"weight: {record.image_weight} = {record.source_weight} "
                f"+ {n * n} - {shift}"
            )
    elif args.map == "rr2-inv":
        a = rr2_inverse(p.parts)
        if args.format == "machine":
            print(
                json.dumps(
                    {"input": list(p.parts), "output": list(a.parts)},
                    sort_keys=True,
                    separators=(",", ":"),
                )
            )
        else:
            print(f"input:  {p}")
            print(f"output: {a}")
    else:  # profile
        if args.source is None or args.target is None or args.n is None:
            print(
                "error: bijection profile requires --source, --target and --n",
                file=sys.stderr,
            )
            return EXIT_USAGE
        source = catalog.lookup(args.source).profile
        target = catalog.lookup(args.target).profile
        image = profile_bijection(p.parts, source, target, args.n)
        base = tuple(
            a - off for a, off in zip(p.parts, source.offsets_at(args.n))
        )
        if args.format == "machine":
            print(
                json.dumps(
                    {
                        "input": list(p.parts),
                        "base": list(base),
                        "output": list(image),
                    },
                    sort_keys=True,
                    separators=(",", ":"),
                )
            )
        else:
            print(f"input:  {p}")
            print(f"base:   {_format_vector(base)}")
            print(f"output: {_format_vector(image)}")
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    catalog = _resolve_catalog(args)
    if args.format == "machine":
        sys.stdout.write(dump_catalog(catalog))
        return EXIT_OK
    headers = ["name", "product", "terms", "source"]
    rows = []
    for entry in catalog.entries():
        name = entry.name
        if entry.aliases:
            name += f" ({', '.join(entry.aliases)})"
        product = entry.product.label() if entry.product else "-"
        terms = "; ".join(
            f"u={b.slots}, S={b.min_weight}" for b in entry.profile.branches
        )
        rows.append([name, product, terms, entry.source])
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in rows)) for i in range(len(headers))
    ]
    print("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)))
    print("  ".join("-" * w for w in widths))
    for row in rows:
        print("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return EXIT_OK


def cmd_series(args: argparse.Namespace) -> int:
    catalog = _resolve_catalog(args)
    kind = args.kind
    if kind == "product":
        if args.modulus is None or not args.residues:
            print(
                "error: series product requires --modulus and --residues",
                file=sys.stderr,
            )
            return EXIT_USAGE
        series = product_side(
            ResidueClass(args.modulus, frozenset(args.residues)), args.order
        )
    elif kind == "glaisher-sum":
        if args.modulus is None:
            print("error: series glaisher-sum requires --modulus", file=sys.stderr)
            return EXIT_USAGE
        series = sum_side_glaisher(args.modulus, args.order)
    elif kind == "profile-sum":
        if args.profile is None:
            print("error: series profile-sum requires --profile", file=sys.stderr)
            return EXIT_USAGE
        series = profile_series(catalog.lookup(args.profile).profile, args.order)
    elif kind == "distinct-sum":
        series = euler_distinct_sum(args.order)
    elif kind == "alpha":
        if args.modulus is None or args.n is None:
            print("error: series alpha requires --modulus and --n", file=sys.stderr)
            return EXIT_USAGE
        series = alpha_closed_form(args.modulus, args.n, args.order)
    else:
        raise UnknownNameError(f"unknown series kind {kind!r}")
    if args.format == "machine":
        print(json.dumps(series.to_list(), separators=(",", ":")))
    else:
        for exponent, coefficient in enumerate(series.coefficients):
            print(f"{exponent}:{coefficient}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qident",
        description="Exact verification of partition identities: "
        "truncated q-series on both sides, chain enumeration as an "
        "independent oracle, and certified bijections.",
    )
    parser.add_argument(
        "--catalog",
        default=None,
        help=f"path to an alternative profile catalog (or ${CATALOG_ENV})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run identity checks")
    p_verify.add_argument("names", nargs="*", help="identity names, or 'all'")
    p_verify.add_argument("--order", type=_positive_int, default=60)
    p_verify.add_argument("--max-weight", type=_nonnegative_int, default=25)
    p_verify.add_argument("--modulus", type=_positive_int, default=None)
    p_verify.add_argument("--format", choices=("text", "machine"), default="text")
    p_verify.set_defaults(func=cmd_verify)

    p_enum = sub.add_parser("enumerate", help="list chain vectors of a profile")
    p_enum.add_argument("profile")
    p_enum.add_argument("--n", type=_nonnegative_int, required=True,
                        help="family index (part count for two-branch profiles)")
    p_enum.add_argument("--weight", type=_nonnegative_int, required=True)
    p_enum.set_defaults(func=cmd_enumerate)

    p_bij = sub.add_parser("bijection", help="apply one of the explicit maps")
    p_bij.add_argument(
        "map", choices=("profile", "rr2", "rr2-inv", "glaisher", "glaisher-inv")
    )
    p_bij.add_argument("partition", help="bracketed form, e.g. '[7,6,4,2,1]'")
    p_bij.add_argument("--modulus", type=_positive_int, default=None)
    p_bij.add_argument("--source", default=None, help="source profile name")
    p_bij.add_argument("--target", default=None, help="target profile name")
    p_bij.add_argument("--n", type=_nonnegative_int, default=None)
    p_bij.add_argument("--format", choices=("text", "machine"), default="text")
    p_bij.set_defaults(func=cmd_bijection)

    p_cat = sub.add_parser("catalog", help="list the profile catalog")
    p_cat.add_argument("--format", choices=("text", "machine"), default="text")
    p_cat.set_defaults(func=cmd_catalog)

    p_series = sub.add_parser("series", help="dump series coefficients")
    p_series.add_argument(
        "kind",
        choices=("product", "glaisher-sum", "profile-sum", "distinct-sum", "alpha"),
    )
    p_series.add_argument("--order", type=_positive_int, default=60)
    p_series.add_argument("--modulus", type=_positive_int, default=None)
    p_series.add_argument("--residues", type=_residue_list, default=None)
    p_series.add_argument("--profile", default=None)
    p_series.add_argument("--n", type=_nonnegative_int, default=None)
    p_series.add_argument("--format", choices=("text", "machine"), default="text")
    p_series.set_defaults(func=cmd_series)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnknownNameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_NAME
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
