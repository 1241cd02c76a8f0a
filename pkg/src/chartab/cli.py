"""Command-line front end.

Five subcommands: `table` emits a generated character table, `stats` the
statistics of a table or one of its rows, `witness` runs a witness
search, `scan` tabulates a statistic along the powers of one family, and
`verify` rebuilds a family's table through the permutation oracle and
cross-checks it against the generator and the closed forms.

Exit codes: 0 on success, 2 on usage errors (argparse), 1 on domain
errors (an out-of-range target, a table past its size guard) with a
diagnostic on standard error.  Output is deterministic: identical
invocations produce identical bytes.  All fractions are parsed exactly;
"0.75" means 3/4, not a float.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from chartab.exactnum import InvalidConductorError, NotAlgebraicIntegerError
from chartab.oracle import (
    GroupTooLargeError,
    builtin_perm_group,
    compare_tables,
    dixon_character_table,
)
from chartab.stats import (
    StatKind,
    char_stats,
    closed_form_stats,
    group_stats,
    render_decimal,
    u_power,
    z_sequence,
)
from chartab.tables import (
    CharacterTable,
    Dihedral,
    Extraspecial2,
    FamilySpec,
    InvalidParameterError,
    MalformedTableError,
    Psl2Even,
    TableTooLargeError,
    build_table,
    spec_to_json,
    validate_table,
)
from chartab.witness import (
    Scope,
    WitnessDomainError,
    witness_global,
    witness_local,
    witness_theta_character,
    witness_theta_group,
)

_DOMAIN_ERRORS = (
    InvalidParameterError,
    TableTooLargeError,
    GroupTooLargeError,
    WitnessDomainError,
    MalformedTableError,
    InvalidConductorError,
    NotAlgebraicIntegerError,
)

_FAMILIES = {
    "dihedral": Dihedral,
    "extraspecial2": Extraspecial2,
    "psl2even": Psl2Even,
}

_STAT_FLAGS = ["zI", "zII", "uI", "uII", "theta", "thetaII"]


def _family_spec(name: str, param: int) -> FamilySpec:
    return _FAMILIES[name](param)


def _parse_family_params(text: str) -> FamilySpec:
    """scan's --family-params value: "family:param", e.g. "dihedral:4"."""
    name, _, raw = text.partition(":")
    if name not in _FAMILIES or not raw:
        raise argparse.ArgumentTypeError(
            f"expected family:param with family in {sorted(_FAMILIES)}, got {text!r}"
        )
    try:
        param = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"family parameter {raw!r} is not an integer")
    return _family_spec(name, param)


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _emit_json(doc) -> None:
    _emit(json.dumps(doc, indent=2))


# ---------------------------------------------------------------------------
# table


def _render_table_pretty(t: CharacterTable) -> str:
    head = ["", *(c.name for c in t.classes)]
    grid = [
        head,
        ["size", *(str(c.size) for c in t.classes)],
        ["order", *(str(c.element_order) for c in t.classes)],
    ]
    for name, row in zip(t.character_names, t.characters):
        grid.append([name, *(str(v) for v in row)])
    widths = [max(len(line[i]) for line in grid) for i in range(len(head))]
    lines = [f"{t.group_name}, order {t.group_order}"]
    for line in grid:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(line, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _cmd_table(args) -> int:
    t = build_table(_family_spec(args.family, args.param))
    if args.format == "json":
        _emit_json(t.to_json())
    else:
        _emit(_render_table_pretty(t))
    return 0


# ---------------------------------------------------------------------------
# stats


def _render_stats_pretty(title: str, record) -> str:
    lines = [title]
    for kind in StatKind:
        v = record.get(kind)
        lines.append(f"  {kind.value:<7} = {v} ({render_decimal(v)})")
    return "\n".join(lines) + "\n"


def _cmd_stats(args) -> int:
    t = build_table(_family_spec(args.family, args.param))
    if args.char is None:
        record = group_stats(t)
        subject = {"group": t.group_name}
        title = f"{t.group_name}: group statistics"
    else:
        record = char_stats(t, t.character_index(args.char))
        subject = {"group": t.group_name, "character": args.char}
        title = f"{t.group_name}: statistics of character {args.char}"
    if args.format == "json":
        _emit_json({**subject, "stats": record.to_json()})
    else:
        _emit(_render_stats_pretty(title, record))
    return 0


# ---------------------------------------------------------------------------
# witness


def _render_witness_pretty(w) -> str:
    q = w.query
    lines = [
        f"witness for {q.kind.value} at scope {q.scope.value}: "
        f"target {q.target}, epsilon {q.epsilon}",
        "expression:",
    ]
    for f in w.factors:
        fam = spec_to_json(f.family)
        params = ", ".join(f"{k}={v}" for k, v in fam.items() if k != "kind")
        who = f"{fam['kind']}({params})"
        if f.character is not None:
            who += f" character {f.character}"
        lines.append(f"  {who} ^ {f.power}")
    lines.append(f"k = {w.k}")
    lines.append(f"value = {w.value} ({render_decimal(w.value)})")
    lines.append("trail:")
    for step in w.trail:
        lines.append(f"  {step.choice}: {step.rule} [{step.value}]")
    return "\n".join(lines) + "\n"


def _cmd_witness(args) -> int:
    kind = StatKind(args.stat)
    scope = Scope(args.scope)
    if kind is StatKind.THETA_ELEM:
        if scope is Scope.CHARACTER:
            w = witness_theta_character(args.target, args.eps)
        else:
            w = witness_theta_group(args.target, args.eps)
    elif scope is Scope.CHARACTER:
        w = witness_local(kind, args.target, args.eps)
    else:
        w = witness_global(kind, args.target, args.eps)
    if args.format == "json":
        _emit_json(w.to_json())
    else:
        _emit(_render_witness_pretty(w))
    return 0


# ---------------------------------------------------------------------------
# scan


def _cmd_scan(args) -> int:
    if args.kmax < 0:
        raise InvalidParameterError(f"--kmax must be >= 0, got {args.kmax}")
    kind = StatKind(args.stat)
    scope = Scope(args.scope)
    spec = args.family_params
    needs_u = kind not in (StatKind.Z_ELEM, StatKind.Z_CLASS)
    if isinstance(spec, Psl2Even) and scope is Scope.GROUP and needs_u:
        raise WitnessDomainError(
            "group-scope unit fractions of psl2even are not multiplicative "
            "under direct products; only zI and zII group scans are available"
        )
    cf = closed_form_stats(spec)
    if scope is Scope.CHARACTER:
        if cf.character is None:
            raise WitnessDomainError(
                f"{args.stat} character scan needs a distinguished character, "
                f"and this family has none at this parameter"
            )
        record = cf.character
    else:
        record = cf.group
    element = kind.element_weighted
    z_step = record.z_elem if element else record.z_class
    u_base = record.u_elem if element else record.u_class
    zs = z_sequence(Fraction(0), z_step, args.kmax)

    rows = []
    for k in range(args.kmax + 1):
        if kind in (StatKind.Z_ELEM, StatKind.Z_CLASS):
            value = zs[k]
        elif kind in (StatKind.U_ELEM, StatKind.U_CLASS):
            value = u_power(u_base, k)
        else:
            value = zs[k] + u_power(u_base, k)
        rows.append((k, value))

    if args.format == "json":
        _emit_json(
            {
                "stat": args.stat,
                "scope": args.scope,
                "family": spec_to_json(spec),
                "kmax": args.kmax,
                "rows": [
                    {"k": k, "fraction": str(v), "decimal": render_decimal(v)}
                    for k, v in rows
                ],
            }
        )
    elif args.format == "csv":
        lines = ["k,fraction,decimal"]
        lines.extend(f"{k},{v},{render_decimal(v)}" for k, v in rows)
        _emit("\n".join(lines) + "\n")
    else:
        fam = spec_to_json(spec)
        lines = [f"{args.stat} at scope {args.scope} for powers of {fam}"]
        width = max(len(str(v)) for _, v in rows)
        for k, v in rows:
            lines.append(f"  k={k:<4} {str(v):>{width}}  {render_decimal(v)}")
        _emit("\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# verify


def _dihedral_zero_counts(t: CharacterTable, n: int) -> str | None:
    """Per-character zero counts of the two-dimensional rows; None if all
    match the closed forms, else a description of the first mismatch."""
    half = 2 ** (n - 1)
    for h in range(1, half):
        row = t.characters[t.character_index(f"rot{h}")]
        zero_elems = sum(c.size for c, v in zip(t.classes, row) if v.is_zero)
        zero_cells = sum(1 for v in row if v.is_zero)
        two_adic = (h & -h).bit_length() - 1
        want_elems = 2 ** (two_adic + 1) + 2**n
        want_cells = 2**two_adic + 2
        if zero_elems != want_elems or zero_cells != want_cells:
            return (
                f"character rot{h}: zero counts ({zero_elems}, {zero_cells}) "
                f"differ from closed forms ({want_elems}, {want_cells})"
            )
    return None


def _cmd_verify(args) -> int:
    spec = _family_spec(args.family, args.param)
    checks: list[tuple[str, bool, str | None]] = []

    table = build_table(spec)
    report = validate_table(table)
    checks.append(
        (
            "generated table satisfies the table identities",
            report.ok,
            report.failure,
        )
    )

    oracle_table = dixon_character_table(builtin_perm_group(spec))
    comparison = compare_tables(table, oracle_table)
    checks.append(
        (
            "oracle table matches the generated table up to relabeling",
            comparison.matched,
            comparison.reason,
        )
    )

    cf = closed_form_stats(spec)
    actual_group = group_stats(table)
    checks.append(
        (
            "group statistics match the closed forms",
            actual_group == cf.group,
            None if actual_group == cf.group else f"table gives {actual_group}",
        )
    )
    if cf.character is not None:
        actual_char = char_stats(table, table.character_index(cf.character_name))
        checks.append(
            (
                f"statistics of character {cf.character_name} match the closed forms",
                actual_char == cf.character,
                None if actual_char == cf.character else f"table gives {actual_char}",
            )
        )
    if isinstance(spec, Dihedral) and spec.n >= 2:
        detail = _dihedral_zero_counts(table, spec.n)
        checks.append(
            ("zero counts of planar characters match the closed forms", detail is None, detail)
        )

    ok = all(passed for _, passed, _ in checks)
    if args.format == "json":
        _emit_json(
            {
                "group": table.group_name,
                "order": table.group_order,
                "ok": ok,
                "checks": [
                    {"check": name, "ok": passed, "detail": detail}
                    for name, passed, detail in checks
                ],
            }
        )
    else:
        lines = [f"{table.group_name}, order {table.group_order}"]
        for name, passed, detail in checks:
            mark = "ok  " if passed else "FAIL"
            lines.append(f"  {mark} {name}" + (f": {detail}" if detail else ""))
        _emit("\n".join(lines) + "\n")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument plumbing


def _add_family_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("family", choices=sorted(_FAMILIES))
    sub.add_argument("param", type=int, help="family parameter (n or r)")


def _add_format(sub: argparse.ArgumentParser, choices: list[str]) -> None:
    sub.add_argument("--format", choices=choices, default="json")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chartab",
        description="exact character tables, value statistics, and witness search",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_table = sub.add_parser("table", help="emit a generated character table")
    _add_family_arguments(p_table)
    _add_format(p_table, ["json", "pretty"])
    p_table.set_defaults(handler=_cmd_table)

    p_stats = sub.add_parser("stats", help="statistics of a table or one character")
    _add_family_arguments(p_stats)
    p_stats.add_argument("--char", default=None, help="character name (default: whole table)")
    _add_format(p_stats, ["json", "pretty"])
    p_stats.set_defaults(handler=_cmd_stats)

    p_witness = sub.add_parser("witness", help="search for a statistic witness")
    p_witness.add_argument("--stat", choices=_STAT_FLAGS, required=True)
    p_witness.add_argument("--scope", choices=["character", "group"], required=True)
    p_witness.add_argument("--target", type=Fraction, required=True)
    p_witness.add_argument("--eps", type=Fraction, required=True)
    _add_format(p_witness, ["json", "pretty"])
    p_witness.set_defaults(handler=_cmd_witness)

    p_scan = sub.add_parser("scan", help="tabulate a statistic along powers of a family")
    p_scan.add_argument("--stat", choices=_STAT_FLAGS, required=True)
    p_scan.add_argument("--scope", choices=["character", "group"], required=True)
    p_scan.add_argument("--family-params", type=_parse_family_params, required=True)
    p_scan.add_argument("--kmax", type=int, required=True)
    _add_format(p_scan, ["json", "csv", "pretty"])
    p_scan.set_defaults(handler=_cmd_scan)

    p_verify = sub.add_parser(
        "verify", help="cross-check a family against the permutation oracle"
    )
    _add_family_arguments(p_verify)
    _add_format(p_verify, ["json", "pretty"])
    p_verify.set_defaults(handler=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except _DOMAIN_ERRORS as exc:
        print(f"chartab: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
