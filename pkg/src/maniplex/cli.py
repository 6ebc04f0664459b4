"""Command-line interface, the JSON document format and DOT export.

Document format (one JSON object)::

    {"rank": 2, "flag_count": 4, "connections": [[1, 0, 3, 2], [3, 2, 1, 0]],
     "base_flag": 0, "name": "polygon(2)"}

``connections[i][f]`` is the ``i``-adjacent flag of ``f``.  ``base_flag``
defaults to 0 and ``name`` is optional.

Exit codes: 0 success, 1 negative verdict (``pip``, ``admissible``), 2 error.
"""
import argparse
import json
import os
import sys

import numpy as np

from . import catalog
from .errors import (CommutationFailure, ManiplexError, NotInvolution,
                     RankMismatch, SchemaError)
from .flagcore import Premaniplex, RootedPremaniplex, as_rooted, colorset, dual
from .mixing import i_double, mix, smallest_regular_cover
from .polyvariance import (pip_check, pip_check_recursive,
                           src_polytopality_report, variance_group_lower)
from .symmetry import automorphisms, chain_transitive, is_T_admissible, two_orbit_class

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def document_to_rooted(doc):
    """Check a decoded document against the schema and build the premaniplex.

    Returns ``(rooted, name)``.
    """
    if not isinstance(doc, dict):
        raise SchemaError("", "document must be a JSON object")
    for key in ("rank", "flag_count", "connections"):
        if key not in doc:
            raise SchemaError(key, "missing required field")
    unknown = set(doc) - {"rank", "flag_count", "connections", "base_flag", "name"}
    if unknown:
        raise SchemaError(sorted(unknown)[0], "unknown field")
    n, m = doc["rank"], doc["flag_count"]
    if not _is_int(n) or n < 1:
        raise SchemaError("rank", "must be an integer >= 1")
    if not _is_int(m) or m < 1:
        raise SchemaError("flag_count", "must be an integer >= 1")
    rows = doc["connections"]
    if not isinstance(rows, list) or len(rows) != n:
        raise SchemaError("connections", f"must be a list of {n} rows")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != m:
            raise SchemaError(f"connections[{i}]", f"must be a list of {m} flags")
        for f, g in enumerate(row):
            if not _is_int(g) or not 0 <= g < m:
                raise SchemaError(f"connections[{i}][{f}]", f"must be a flag index in [0, {m})")
    base = doc.get("base_flag", 0)
    if not _is_int(base) or not 0 <= base < m:
        raise SchemaError("base_flag", f"must be a flag index in [0, {m})")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise SchemaError("name", "must be a string")
    try:
        pm = Premaniplex(np.array(rows, dtype=np.int64))
    except NotInvolution as exc:
        err = NotInvolution(exc.color, exc.flag,
                            f"connections[{exc.color}]: {exc}")
        err.path = f"connections[{exc.color}]"
        raise err from None
    except CommutationFailure as exc:
        err = CommutationFailure(exc.i, exc.j, exc.flag)
        err.path = f"connections[{exc.i}]"
        err.args = (f"connections[{exc.i}]: {exc}",)
        raise err from None
    return RootedPremaniplex(pm, base), name


def parse(text):
    """Document text -> RootedPremaniplex."""
    return parse_document(text)[0]


def parse_document(text):
    """Document text -> ``(RootedPremaniplex, name)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}", f"invalid JSON: {exc.msg}") from None
    return document_to_rooted(doc)


def serialize(rp, name=None) -> str:
    """RootedPremaniplex -> document text (one connection row per line)."""
    rp = as_rooted(rp)
    head = {"rank": rp.rank, "flag_count": rp.flag_count, "base_flag": rp.base_flag}
    if name is not None:
        head["name"] = name
    rows = ",\n    ".join(json.dumps([int(x) for x in row]) for row in rp.connections)
    fields = [f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in head.items()]
    fields.append(f'  "connections": [\n    {rows}\n  ]')
    return "{\n" + ",\n".join(fields) + "\n}\n"


def export_dot(rp, path=None, name="premaniplex") -> str:
    """Undirected DOT graph: one node per flag, one edge per colour class pair
    (``color=i``), semi-edges as self-loops, base flag drawn double."""
    rp = as_rooted(rp)
    lines = [f"graph {json.dumps(name)} {{"]
    for f in range(rp.flag_count):
        attr = ', shape=doublecircle, base=true' if f == rp.base_flag else ""
        lines.append(f'  {f} [label="{f}"{attr}];')
    for i in range(rp.rank):
        row = rp.connections[i]
        for f in range(rp.flag_count):
            g = int(row[f])
            if g >= f:
                lines.append(f'  {f} -- {g} [color={i}, label="{i}"];')
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------

def class_label(cls) -> str:
    if cls.kind == "regular":
        return "regular"
    if cls.kind == "two-orbit":
        return "class 2_{" + ",".join(str(i) for i in sorted(cls.I)) + "}"
    return f"{cls.orbit_count}-orbit"


def _load(source, base=None, rank=None):
    """A file path or a catalog spec such as ``torus_44(1,2)``."""
    if os.path.exists(source):
        with open(source) as fh:
            rp, name = parse_document(fh.read())
    else:
        entry = catalog.build(source)
        rp, name = entry.result, source.strip()
    if base is not None:
        rp = RootedPremaniplex(rp.premaniplex, base)
    if rank is not None and rp.rank != rank:
        raise RankMismatch(rank, rp.rank)
    return rp, name


def _colors(text, rank):
    if text is None or not text.strip():
        return frozenset()
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad colour list {text!r}") from None
    return colorset(vals, rank)


def _emit(args, rp, name):
    text = serialize(rp, name)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary(rp):
    return f"{rp.flag_count} flags"


def cmd_validate(args, inputs):
    rp, name = inputs[0]
    from .flagcore import is_maniplex
    kind = "maniplex" if is_maniplex(rp) else "premaniplex"
    print(f"valid {kind}: rank {rp.rank}, {rp.flag_count} flags")
    return EXIT_OK


def cmd_info(args, inputs):
    rp, name = inputs[0]
    group = automorphisms(rp)
    cls = two_orbit_class(rp)
    k = group.orbit_count
    print(f"{rp.flag_count} flags, {k} orbit{'' if k == 1 else 's'}, {class_label(cls)}")
    print(f"rank {rp.rank}, automorphism group order {group.order}")
    faces = [i for i in range(rp.rank) if chain_transitive(rp, {i})]
    print("face-transitive ranks: " + (",".join(map(str, faces)) if faces else "none"))
    if rp.rank >= 3:
        mst = chain_transitive(rp, {0, rp.rank - 1})
        print(f"medial-section-transitive: {'yes' if mst else 'no'}")
    return EXIT_OK


def cmd_mix(args, inputs):
    (a, na), (b, nb) = inputs[:2]
    r = mix(a, b)
    _emit(args, r.mix, f"mix({na},{nb})" if na and nb else None)
    if args.output:
        print(f"mix: {_summary(r.mix)}")
    return EXIT_OK


def cmd_dual(args, inputs):
    rp, name = inputs[0]
    _emit(args, dual(rp), f"dual({name})" if name else None)
    return EXIT_OK


def cmd_double(args, inputs):
    rp, name = inputs[0]
    I = _colors(args.I, rp.rank)
    q = i_double(rp, I)
    _emit(args, q, None)
    if args.output:
        print(f"I-double: {_summary(q)}")
    return EXIT_OK


def cmd_pip(args, inputs):
    rp, name = inputs[0]
    if args.mode:
        verdict = pip_check_recursive(rp, args.mode)
        witness = None
    else:
        res = pip_check(rp)
        verdict, witness = res.verdict, res.witness
    print(f"polytope: {'true' if verdict else 'false'}")
    if witness is not None:
        f, g, i, j = witness
        print(f"witness: flags {f} and {g} share [0,{j}] and [{i},{rp.rank - 1}] "
              f"orbits but not [{i},{j}]")
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_variance(args, inputs):
    (a, _), (b, _) = inputs[:2]
    vg = variance_group_lower(a, b)
    print(f"order: {vg.order}")
    print(f"well-defined: {'true' if vg.well_defined else 'false'}")
    if vg.witness is not None:
        print(f"witness flag: {vg.witness}")
    return EXIT_OK


def cmd_src(args, inputs):
    rp, name = inputs[0]
    cover = smallest_regular_cover(rp)
    _emit(args, cover, f"src({name})" if name else None)
    out = sys.stdout if args.output else sys.stderr
    print(f"smallest regular cover: {_summary(cover)}", file=out)
    cls = two_orbit_class(rp)
    if cls.kind == "two-orbit":
        try:
            rep = src_polytopality_report(rp)
        except ManiplexError as exc:
            print(f"report: not available ({exc})", file=out)
        else:
            print(f"report: polytope {'true' if rep.verdict else 'false'}; "
                  f"facets {rep.facets_polytopal}, vertex-figures "
                  f"{rep.vertex_figures_polytopal}, variance {rep.variance_condition}; "
                  f"case {rep.details['case']}", file=out)
    return EXIT_OK


def cmd_admissible(args, inputs):
    (m, _), (t, _) = inputs[:2]
    ok = is_T_admissible(m, t)
    print(f"admissible: {'true' if ok else 'false'}")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_export_dot(args, inputs):
    rp, name = inputs[0]
    text = export_dot(rp, args.output, name=name or "premaniplex")
    if not args.output:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "validate": (cmd_validate, 1), "info": (cmd_info, 1), "mix": (cmd_mix, 2),
    "dual": (cmd_dual, 1), "double": (cmd_double, 1), "pip": (cmd_pip, 1),
    "variance": (cmd_variance, 2), "src": (cmd_src, 1),
    "admissible": (cmd_admissible, 2), "export-dot": (cmd_export_dot, 1),
}


def build_parser():
    ap = argparse.ArgumentParser(prog="maniplex", description=(
        "Premaniplexes: mixing, symmetry, variance groups and polytopality. "
        "Inputs are JSON documents or catalog specs like 'torus_44(1,2)'."))
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("inputs", nargs="*", help="document paths or catalog specs")
    ap.add_argument("--catalog", action="append", default=[], metavar="NAME(params)",
                    help="catalog entry to use as an input (repeatable)")
    ap.add_argument("--base", type=int, help="base flag of the first input")
    ap.add_argument("--base2", type=int, help="base flag of the second input")
    ap.add_argument("--rank", type=int, help="expected rank of every input")
    ap.add_argument("-I", dest="I", help="colour set as a comma list, e.g. 0,2")
    ap.add_argument("-o", "--output", help="output path (default: standard output)")
    ap.add_argument("--mode", choices=("facet", "facet-and-vertex", "medial-transitive"),
                    help="recursive polytopality mode for 'pip'")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_intermixed_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    fn, arity = COMMANDS[args.command]
    sources = list(args.inputs) + list(args.catalog)
    if len(sources) != arity:
        print(f"error: {args.command} takes {arity} input(s), got {len(sources)}",
              file=sys.stderr)
        return EXIT_ERROR
    try:
        bases = [args.base, args.base2]
        inputs = [_load(s, bases[k], args.rank) for k, s in enumerate(sources)]
        return fn(args, inputs)
    except (ManiplexError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
