"""Command line: enum, free-dims, colouring, verify, ind-check.

Exit codes: 0 success, 2 validation or schema error, 3 budget refusal,
4 invariant failure. Output is deterministic; CSV uses LF line endings.
Set WALLKIT_CACHE_DIR to cache enum, free-dims and ind-check results.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
from math import factorial

from . import __version__
from . import checks
from .colouring import MAX_BRICKS as COLOUR_MAX_BRICKS
from .colouring import SIGN_RULES, betti_numbers, build_complex, d_squared_zero
from .errors import BudgetExceeded, InvariantFailure, ValidationError
from .smodule import DimSeq, boxtimes_dims, val_boxtimes_induced_dims
from .walls import MAX_BRICKS, MAX_GROUND, enumerate_walls, wall_from_dict, wall_to_dict

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_INVARIANT = 0, 2, 3, 4


class Failed(Exception):
    """Output was produced but an invariant in it failed."""


# -------------------------------------------------------------------- cache


def _cache_path(command: str, params: dict) -> str | None:
    root = os.environ.get("WALLKIT_CACHE_DIR")
    if not root:
        return None
    key = json.dumps({"command": command, "params": params, "version": __version__}, sort_keys=True)
    return os.path.join(root, hashlib.sha256(key.encode()).hexdigest() + ".out")


def cached(command: str, params: dict, compute) -> str:
    """Read-through cache of a command's full output text."""
    path = _cache_path(command, params)
    if path and os.path.exists(path):
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    text = compute()
    if path:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path))
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    return text


# ------------------------------------------------------------------ helpers


def _json(obj) -> str:
    """Valid JSON, one top-level field (or one list item) per line."""
    def block(items, indent):
        pad = " " * indent
        return "[\n" + ",\n".join(pad + json.dumps(x) for x in items) + "\n" + pad[:-2] + "]"

    if isinstance(obj, list):
        return block(obj, 2) + "\n"
    lines = []
    for k, v in obj.items():
        if isinstance(v, list) and v and (isinstance(v[0], dict) or k == "rows"):
            lines.append(f"  {json.dumps(k)}: {block(v, 4)}")
        else:
            lines.append(f"  {json.dumps(k)}: {json.dumps(v)}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dims(text: str) -> DimSeq:
    return DimSeq.parse(text)


# ----------------------------------------------------------------- commands


def cmd_enum(args) -> str:
    params = {"ground": args.ground, "bricks": args.bricks, "connected": args.connected,
              "format": args.format, "max_ground": args.max_ground, "max_bricks": args.max_bricks}

    def compute():
        walls = enumerate_walls(args.ground, args.bricks, args.connected,
                                max_ground=args.max_ground, max_bricks=args.max_bricks)
        if args.format == "csv":
            rows = []
            for i, w in enumerate(walls, start=1):
                d = wall_to_dict(w)
                rows.append([i, ";".join(" ".join(map(str, b)) for b in d["bricks"]),
                             ";".join(f"{a}<{b}" for a, b in d["relations"])])
            return _csv(["index", "bricks", "relations"], rows)
        return _json({"ground": args.ground, "bricks": args.bricks, "connected": args.connected,
                      "count": len(walls), "walls": [wall_to_dict(w) for w in walls]})

    return cached("enum", params, compute)


def cmd_free_dims(args) -> str:
    gen = _dims(args.gens)
    params = {"gens": str(gen), "max_weight": args.max_weight, "max_arity": args.max_arity,
              "oracle": args.oracle, "format": args.format,
              "max_ground": args.max_ground, "max_bricks": args.max_bricks}

    def compute():
        rows = checks.free_dims_table(gen, args.max_weight, args.max_arity, args.oracle,
                                      max_ground=args.max_ground, max_bricks=args.max_bricks)
        header = ["weight", "arity", "wall_formula", "weight2_closed"]
        if args.oracle:
            header.append("level_oracle")
        table = [[rho, n, wall, closed] + ([level] if args.oracle else [])
                 for rho, n, wall, closed, level in rows]
        agree = all((c is None or c == w) and (l is None or l == w) for _, _, w, c, l in rows)
        if args.format == "json":
            text = _json({"gens": str(gen), "header": header, "rows": table, "agree": agree})
        else:
            text = _csv(header, [["" if x is None else x for x in row] for row in table])
        return text

    text = cached("free-dims", params, compute)
    if '"agree": false' in text or not _csv_agrees(text, args):
        raise Failed(text)
    return text


def _csv_agrees(text: str, args) -> bool:
    if args.format != "csv":
        return True
    for row in list(csv.reader(io.StringIO(text)))[1:]:
        wall = row[2]
        if any(x not in ("", wall) for x in row[3:]):
            return False
    return True


def cmd_colouring(args) -> str:
    try:
        if args.wall == "-":
            data = json.load(sys.stdin)
        else:
            with open(args.wall, encoding="utf-8") as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read wall file: {exc}") from exc
    w = wall_from_dict(data)
    cx = build_complex(w, sign_rule=args.sign_rule, max_bricks=args.max_bricks, check=False)
    ok = d_squared_zero(cx)
    report = {"wall": wall_to_dict(w), "graded_counts": cx.graded_counts()}
    if args.betti:
        hom = betti_numbers(cx)
        report["betti"] = [b for b, _ in hom]
        report["torsion"] = [t for _, t in hom]
    report["d_squared_zero"] = ok
    report["euler"] = cx.euler()
    text = _json(report)
    if args.check_d2 and not ok:
        raise Failed(text)
    return text


def cmd_verify(args) -> str:
    corrupt = checks.flip_first if args.corrupt_sign else None
    results = checks.run_suite(args.max_ground, args.max_bricks, corrupt=corrupt)
    if args.format == "json":
        text = _json([{"name": c.name, "status": c.status, "detail": c.detail} for c in results])
    else:
        text = "".join(f"{c.status.upper()}\t{c.name}\t{c.detail}\n" for c in results)
    if not all(c.ok for c in results):
        raise Failed(text)
    return text


def cmd_ind_check(args) -> str:
    v, w = _dims(args.v), _dims(args.w)
    if args.max_arity > 4:
        raise BudgetExceeded("ind-check is limited to arity 4")
    params = {"v": str(v), "w": str(w), "max_arity": args.max_arity, "format": args.format}

    def compute():
        box = boxtimes_dims(v, w, max(args.max_arity, 1))
        rows = []
        for n in range(1, args.max_arity + 1):
            a = factorial(n) * box[n]
            b = val_boxtimes_induced_dims(v, w, n)
            rows.append([n, a, b, "equal" if a == b else "differ"])
        header = ["arity", "scaled_boxtimes", "induced_product", "verdict"]
        if args.format == "json":
            return _json({"v": str(v), "w": str(w), "header": header, "rows": rows})
        return _csv(header, rows)

    text = cached("ind-check", params, compute)
    if "differ" in text:
        raise Failed(text)
    return text


# ------------------------------------------------------------------- parser


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from exc
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wallkit", description="Exact wall calculus for protoperads.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enum", help="list canonical walls")
    e.add_argument("--ground", type=_positive, required=True)
    e.add_argument("--bricks", type=_positive, required=True)
    e.add_argument("--connected", action="store_true")
    e.add_argument("--format", choices=("json", "csv"), default="json")
    e.add_argument("--out")
    e.add_argument("--max-ground", type=_positive, default=MAX_GROUND)
    e.add_argument("--max-bricks", type=_positive, default=MAX_BRICKS)
    e.set_defaults(func=cmd_enum)

    f = sub.add_parser("free-dims", help="dimensions of the free protoperad")
    f.add_argument("--gens", required=True, help='generator dimensions, e.g. "0,1"')
    f.add_argument("--max-weight", type=_positive, default=2)
    f.add_argument("--max-arity", type=_positive, default=4)
    f.add_argument("--oracle", action="store_true", help="add the levelled-partition column")
    f.add_argument("--format", choices=("json", "csv"), default="csv")
    f.add_argument("--out")
    f.add_argument("--max-ground", type=_positive, default=MAX_GROUND)
    f.add_argument("--max-bricks", type=_positive, default=MAX_BRICKS)
    f.set_defaults(func=cmd_free_dims)

    c = sub.add_parser("colouring", help="colouring complex report of a wall file")
    c.add_argument("wall", help="wall JSON file, or - for stdin")
    c.add_argument("--betti", action="store_true", help="include Betti numbers and torsion")
    c.add_argument("--check-d2", action="store_true", help="exit 4 when the boundary squares to nonzero")
    c.add_argument("--sign-rule", choices=SIGN_RULES, default="coherent")
    c.add_argument("--max-bricks", type=_positive, default=COLOUR_MAX_BRICKS)
    c.add_argument("--out")
    c.set_defaults(func=cmd_colouring)

    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--max-ground", type=_positive, default=3)
    v.add_argument("--max-bricks", type=_positive, default=4)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--out")
    v.add_argument("--corrupt-sign", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("ind-check", help="compare Ind of a connected product with the induced product")
    i.add_argument("--v", required=True)
    i.add_argument("--w", required=True)
    i.add_argument("--max-arity", type=_positive, default=3)
    i.add_argument("--format", choices=("json", "csv"), default="csv")
    i.add_argument("--out")
    i.set_defaults(func=cmd_ind_check)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
    except Failed as exc:
        _emit(exc.args[0], args.out)
        return EXIT_INVARIANT
    except BudgetExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantFailure as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValidationError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
