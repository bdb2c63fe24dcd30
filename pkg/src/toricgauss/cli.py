"""Command line driver.

Reads an input document (JSON, from a file argument or stdin), runs one
command and writes a single JSON document with a stable key order.

Exit codes: 0 success, 1 invalid input, 2 failed precondition,
3 budget exhausted, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from math import comb

import jsonschema

from . import __version__
from .families import pnN_points, pnN_vertices
from .gauss import BudgetExceeded, NotGenericallySpanned, analyze, classify, default_threads
from .jets import ZeroCoordinate, is_generically_kjet_spanned, jet_matrix
from .linalg import NotSaturated
from .oracle import ORACLE_BUDGET, Mismatch, cross_check
from .polytope import (
    NotFullDimensional,
    NotSmooth,
    PointConfiguration,
    convex_hull,
    edge_criterion_kjet,
    is_smooth,
    lattice_points,
)

log = logging.getLogger("toricgauss")

SCHEMA_VERSION = 1
SAFE_INT = 2**53

_int_vector = {"type": "array", "items": {"type": "integer"}, "minItems": 1}

INPUT_SCHEMA = {
    "type": "object",
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "points": {"type": "array", "items": _int_vector, "minItems": 1},
        "polytope_vertices": {"type": "array", "items": _int_vector, "minItems": 1},
        "order": {"type": "integer", "minimum": 0},
        "options": {
            "type": "object",
            "properties": {
                "mode": {"enum": ["full", "exchange"]},
                "strict_dimension": {"type": "boolean"},
                "budget": {"type": ["integer", "null"], "minimum": 1},
            },
            "additionalProperties": False,
        },
    },
    "oneOf": [
        {"required": ["points"], "not": {"required": ["polytope_vertices"]}},
        {"required": ["polytope_vertices"], "not": {"required": ["points"]}},
    ],
    "additionalProperties": False,
}

EXIT_OK, EXIT_SCHEMA, EXIT_PRECONDITION, EXIT_BUDGET, EXIT_MISMATCH = 0, 1, 2, 3, 4

PRECONDITION_ERRORS = (
    NotGenericallySpanned,
    NotFullDimensional,
    NotSmooth,
    NotSaturated,
    ZeroCoordinate,
)


class SchemaError(ValueError):
    pass


# --- JSON encoding ---------------------------------------------------------

def encode_document(doc: dict) -> str:
    """Serialize with integers of magnitude >= 2^53 written as decimal strings.

    The JSON pointers of those strings are listed under ``"big_integers"``
    so that :func:`decode_document` restores them exactly.
    """
    paths = []

    def walk(obj, path):
        if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
            return obj
        if isinstance(obj, int):
            if abs(obj) >= SAFE_INT:
                paths.append(path)
                return str(obj)
            return obj
        if isinstance(obj, dict):
            return {k: walk(v, f"{path}/{k}") for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [walk(v, f"{path}/{i}") for i, v in enumerate(obj)]
        raise TypeError(f"cannot encode {type(obj).__name__}")

    out = walk(doc, "")
    if paths:
        out["big_integers"] = paths
    return _dump(out, 0) + "\n"


def _dump(obj, level: int) -> str:
    # objects one key per line; arrays of scalars stay on one line
    pad = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        items = [pad + _dump(v, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * level + "]"
    return json.dumps(obj)


def decode_document(text: str) -> dict:
    doc = json.loads(text)
    for path in doc.pop("big_integers", []):
        parts = path.split("/")[1:]
        parent = doc
        for p in parts[:-1]:
            parent = parent[int(p)] if isinstance(parent, list) else parent[p]
        last = parts[-1]
        if isinstance(parent, list):
            parent[int(last)] = int(parent[int(last)])
        else:
            parent[last] = int(parent[last])
    return doc


# --- input handling --------------------------------------------------------

def _field_name(err: jsonschema.ValidationError) -> str:
    path = "/".join(str(p) for p in err.absolute_path)
    return path or "<document>"


def validate_input(doc) -> None:
    validator = jsonschema.Draft202012Validator(INPUT_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        if err.validator == "oneOf":
            raise SchemaError("exactly one of 'points' or 'polytope_vertices' is required")
        raise SchemaError(f"invalid field '{_field_name(err)}': {err.message}")
    key = "points" if "points" in doc else "polytope_vertices"
    widths = {len(v) for v in doc[key]}
    if len(widths) != 1:
        raise SchemaError(f"invalid field '{key}': vectors have different lengths {sorted(widths)}")
    if key == "points" and len({tuple(v) for v in doc[key]}) != len(doc[key]):
        raise SchemaError("invalid field 'points': duplicate points")


def load_configuration(doc: dict, strict: bool):
    """Point configuration of the document, reduced to its affine span if needed.

    Returns ``(configuration, reduction_info_or_None)``.
    """
    if "points" in doc:
        cfg = PointConfiguration.from_points(doc["points"])
    else:
        cfg = lattice_points(convex_hull(PointConfiguration.from_points(
            doc["polytope_vertices"], dedupe=True)))
    if cfg.full_dimensional:
        return cfg, None
    if strict:
        raise NotFullDimensional(
            f"points span an affine space of dimension {cfg.affine_rank} "
            f"in Z^{cfg.ambient_rank} (strict dimension mode)"
        )
    local, chart = cfg.reduced()
    info = {
        "ambient_rank": cfg.ambient_rank,
        "dimension": chart.dim,
        "origin": list(chart.origin),
        "basis": chart.section.to_rows(),
    }
    return local, info


# --- commands --------------------------------------------------------------

def cmd_jets(cfg, k, opts):
    J = jet_matrix(cfg, k)
    q = comb(cfg.ambient_rank + k, k)
    rank = J.rank()
    return {
        "q": q,
        "rows": [list(a) for a in J.row_index],
        "columns": [list(u) for u in cfg.points],
        "matrix": J.entries.to_rows(),
        "rank": rank,
        "generically_kjet_spanned": rank == q,
    }


def cmd_spanned(cfg, k, opts):
    J = jet_matrix(cfg, k)
    q = comb(cfg.ambient_rank + k, k)
    hull = convex_hull(cfg)
    smooth = is_smooth(hull)
    complete = set(lattice_points(hull).points) == set(cfg.points)
    return {
        "q": q,
        "osculating_dimension": J.rank(),
        "generically_kjet_spanned": is_generically_kjet_spanned(cfg, k),
        "hull_smooth": smooth,
        "all_lattice_points": complete,
        "kjet_spanned": edge_criterion_kjet(hull, k) if smooth and complete else None,
    }


def cmd_gauss(cfg, k, opts):
    return analyze(cfg, k, mode=opts["mode"], budget=opts["budget"],
                   threads=opts["threads"]).to_dict()


def cmd_classify(cfg, k, opts):
    return classify(cfg, k, mode=opts["mode"], budget=opts["budget"],
                    threads=opts["threads"]).to_dict()


def cmd_oracle(cfg, k, opts):
    budget = opts["budget"] or ORACLE_BUDGET
    out = cross_check(cfg, k, budget=budget, threads=opts["threads"]).to_dict()
    if not opts.get("timings"):
        del out["timings_seconds"]
    return out


COMMANDS = {
    "jets": cmd_jets,
    "spanned": cmd_spanned,
    "gauss": cmd_gauss,
    "classify": cmd_classify,
    "oracle": cmd_oracle,
}


def run(command: str, doc: dict, *, order=None, mode=None, budget=None, threads=1,
        strict=None, timings=False) -> dict:
    """Run one command on a validated-or-not input document and return the output document."""
    validate_input(doc)
    opts_in = doc.get("options", {})
    k = order if order is not None else doc.get("order")
    if k is None:
        raise SchemaError("invalid field 'order': missing (give it in the document or with --order)")
    if k < 0:
        raise SchemaError("invalid field 'order': must be >= 0")
    opts = {
        "mode": mode or opts_in.get("mode", "full"),
        "budget": budget if budget is not None else opts_in.get("budget"),
        "strict_dimension": strict if strict is not None else opts_in.get("strict_dimension", False),
        "threads": threads,
        "timings": timings,
    }
    cfg, reduction = load_configuration(doc, opts["strict_dimension"])
    result = COMMANDS[command](cfg, k, opts)
    out = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "order": k,
        "ambient_rank": cfg.ambient_rank if reduction is None else reduction["ambient_rank"],
        "num_points": len(cfg),
        "reduction": reduction,
    }
    if command in ("gauss", "classify", "oracle"):
        out["mode"] = opts["mode"]
    out["result"] = result
    return out


def run_family(n: int, N: int, k: int, mode="full", budget=None, threads=1) -> dict:
    pts = pnN_points(n, N)
    rep = analyze(pts, k, mode=mode, budget=budget, threads=threads)
    return {
        "schema": SCHEMA_VERSION,
        "command": "family",
        "family": "pnN",
        "n": n,
        "N": N,
        "order": k,
        "vertices": [list(v) for v in pnN_vertices(n, N)],
        "points": [list(p) for p in pts],
        "lattice_point_count": len(pts),
        "q": comb(n + k, k),
        "result": rep.to_dict(),
    }


# --- argument parsing ------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_SCHEMA, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, with_input=True):
    if with_input:
        p.add_argument("input", nargs="?", default="-",
                       help="input document (JSON); '-' or omitted reads stdin")
    p.add_argument("-k", "--order", "--k", dest="order", type=int, default=None,
                   help="jet order k")
    p.add_argument("--mode", choices=["full", "exchange"], default=None)
    p.add_argument("--budget", type=int, default=None,
                   help="cap on enumeration nodes (or oracle subsets)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes for basis enumeration (default: all cores)")
    p.add_argument("--strict-dim", action="store_true", default=None,
                   help="reject configurations that are not full dimensional")
    p.add_argument("--output", "-o", default="-", help="output path (default stdout)")
    p.add_argument("--timings", action="store_true",
                   help="include wall-clock timings (oracle); output is then not reproducible")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toricgauss",
                     description="Higher order Gauss maps of projective toric varieties.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "jets": "jet matrix at (1,...,1) and its rank",
        "spanned": "generic and (for smooth hulls) full k-jet spannedness",
        "gauss": "B_k, fiber dimension, projection and fiber points",
        "classify": "finiteness / birationality classification",
        "oracle": "cross-check optimized paths against brute force",
    }
    for name, h in helps.items():
        _common(sub.add_parser(name, help=h))
    fam = sub.add_parser("family", help="analyze an instance of a built-in family")
    fam.add_argument("family", choices=["pnN"])
    fam.add_argument("--n", type=int, required=True)
    fam.add_argument("--N", type=int, required=True)
    _common(fam, with_input=False)
    return parser


def _read_input(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise SchemaError(f"cannot read input: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"input is not valid JSON: {exc}") from exc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    threads = args.threads if args.threads is not None else default_threads()
    try:
        if args.command == "family":
            k = args.order if args.order is not None else 2
            if args.n < 2 or args.N < 2:
                raise SchemaError("invalid field 'n'/'N': the family needs n >= 2 and N >= 2")
            doc = run_family(args.n, args.N, k, mode=args.mode or "full",
                             budget=args.budget, threads=threads)
        else:
            doc = run(args.command, _read_input(args.input), order=args.order, mode=args.mode,
                      budget=args.budget, threads=threads, strict=args.strict_dim,
                      timings=args.timings)
    except SchemaError as exc:
        print(f"toricgauss: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except PRECONDITION_ERRORS as exc:
        print(f"toricgauss: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except BudgetExceeded as exc:
        print(f"toricgauss: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except Mismatch as exc:
        print(f"toricgauss: oracle mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH

    text = encode_document(doc)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
