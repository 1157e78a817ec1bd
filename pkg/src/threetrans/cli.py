"""Command line front end: `threetrans <group> <command> [options]`."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import bounds, classify, zhu
from .fischer import FischerSpace, from_f2_space, from_signed_roots, from_single_roots, orthogonal_space, symplectic_space, tensor_shell, valency
from .griess import build_griess, eta_central_charge, verify_quotient_isomorphism
from .matsuo import build_matsuo, central_charge, classify_form, gram_inertia, nondegenerate_quotient, quotient_dimension
from .roots import build_root_system

FORMATS = ("json", "csv", "md")
CONSTRUCTIONS = ("signed", "single", "sp", "o+", "o-")


# ---------------------------------------------------------------------------
# output helpers


def _table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, sort_keys=True, indent=1) + "\n"
    cols = list(rows[0]) if rows else []
    cells = [[_cell(r[c]) for c in cols] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerows(cells)
        return buf.getvalue()
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    lines += ["| " + " | ".join(r) + " |" for r in cells]
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if isinstance(v, dict):
        return ";".join(f"{k}={_cell(x)}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    return str(v)


def _record(d: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(d, sort_keys=True, indent=1) + "\n"
    return _table([{"key": k, "value": d[k]} for k in d], fmt)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# spaces from arguments


def _space(args) -> FischerSpace:
    if getattr(args, "input", None):
        return FischerSpace.from_json(Path(args.input).read_text())
    c = args.construction
    if c in ("signed", "single"):
        r = build_root_system(args.family, args.rank)
        fs = from_signed_roots(r) if c == "signed" else from_single_roots(r)
    elif c == "sp":
        fs = from_f2_space(symplectic_space(args.rank))
    else:
        fs = from_f2_space(orthogonal_space(args.rank, 1 if c == "o+" else -1))
    if args.shell:
        fs = tensor_shell(fs, args.shell)
    return fs


def _space_args(p: argparse.ArgumentParser, with_input: bool = False) -> None:
    p.add_argument("--construction", choices=CONSTRUCTIONS, default="signed",
                   help="root-system space (signed/single) or F2 form (sp, o+, o-)")
    p.add_argument("--family", default="A", help="root system family A, D or E")
    p.add_argument("--rank", type=int, default=2, help="root-system rank, or half the F2 dimension")
    p.add_argument("--shell", type=int, default=0, metavar="M", help="take 2^M copies (J (x) A)")
    if with_input:
        p.add_argument("--input", help="read a Fischer space JSON document instead")


# ---------------------------------------------------------------------------
# commands


def cmd_fischer_build(args) -> int:
    fs = _space(args)
    if args.format == "json":
        _emit(fs.to_json() + "\n", args.out)
    else:
        info = {"family_tag": fs.tag.get("name"), "points": fs.n, "edges": int(fs.adjacency.sum()) // 2, "valency": valency(fs)}
        _emit(_record(info, args.format), args.out)
    return 0


def cmd_matsuo_analyze(args) -> int:
    fs = _space(args)
    a = build_matsuo(fs)
    iner = gram_inertia(a)
    if fs.tau is not None and fs.n <= 260:
        q = nondegenerate_quotient(a).dim
    else:
        q = quotient_dimension(a)
    report = {
        "family_tag": fs.tag.get("name"),
        "dim": a.dim,
        "valency": valency(fs),
        "central_charge": str(central_charge(a)),
        "gram_inertia": {"pos": iner.positive, "zero": iner.zero, "neg": iner.negative},
        "radical_dim": a.dim - q,
        "quotient_dim": q,
        "classification": classify_form(a).value,
    }
    _emit(_record(report, args.format), args.out)
    return 0


def cmd_griess_verify(args) -> int:
    signs = "minus_only" if args.signs in ("minus", "minus_only") else args.signs
    r = build_root_system(args.family, args.rank)
    g = build_griess(r, signs)
    fs = from_signed_roots(r) if signs == "both" else from_single_roots(r)
    q = nondegenerate_quotient(build_matsuo(fs))
    iso = verify_quotient_isomorphism(g, q)
    report = {
        "family": r.name,
        "signs": signs,
        "span": g.span_dim,
        "d": g.d,
        "eta_c": str(eta_central_charge(g)) if signs == "minus_only" else None,
        "quotient_iso": iso,
    }
    _emit(_record(report, args.format), args.out)
    return 0 if iso else 1


def cmd_bounds_run(args) -> int:
    results = bounds.run_all_cases()
    _emit(_table([r.row() for r in results], args.format), args.out)
    return 0 if all(r.ok for r in results) else 1


def cmd_reps_admissible(args) -> int:
    bps = zhu.admissible_bipartitions(args.n)
    expected = zhu.module_count(args.n)
    if args.format == "json":
        doc = {"n": args.n, "count": len(bps), "expected_count": expected, "bipartitions": [b.to_dict() for b in bps]}
        _emit(json.dumps(doc, sort_keys=True, indent=1) + "\n", args.out)
    else:
        _emit(_table([{"index": i, "bipartition": str(b)} for i, b in enumerate(bps)], args.format), args.out)
    return 0 if len(bps) == expected else 1


def read_config(path: str | None) -> dict:
    """Simple key=value lines; '#' starts a comment; dashes in keys become underscores."""
    if not path:
        return {}
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise SystemExit(f"bad config line: {raw!r}")
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def cmd_classify_all(args) -> int:
    file_cfg = read_config(args.config)
    known = classify.Config.keys()
    values = {}
    for key in known + ["format", "out"]:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
        elif key in file_cfg:
            values[key] = file_cfg[key]
    unknown = sorted(set(file_cfg) - set(known) - {"format", "out"})
    if unknown:
        raise SystemExit(f"unknown config keys: {', '.join(unknown)}")
    cfg = classify.Config(**{k: int(values[k]) for k in known if k in values})
    fmt = values.get("format", "json")
    if fmt not in FORMATS:
        raise SystemExit(f"unknown format {fmt!r}")
    report = classify.classify_all(cfg)
    _emit(classify.render(report, fmt), values.get("out"))
    if report["problems"]:
        sys.stderr.write("expectation mismatches:\n")
        for p in report["problems"]:
            sys.stderr.write(f"- {p}\n")
        return 1
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="threetrans", description="Exact replay of the 3-transposition / Matsuo algebra classification.")
    top = ap.add_subparsers(dest="group", required=True)

    def sub(group: str, name: str, fn, help_: str, default_fmt: str | None = "json"):
        g = top.choices.get(group)
        if g is None:
            g = top.add_parser(group)
            g.add_subparsers(dest="command", required=True)
        sp = next(a for a in g._actions if isinstance(a, argparse._SubParsersAction))
        p = sp.add_parser(name, help=help_)
        p.add_argument("--format", choices=FORMATS, default=default_fmt)
        p.add_argument("--out", default=None, help="write to this file instead of stdout")
        p.set_defaults(func=fn)
        return p

    p = sub("classify", "all", cmd_classify_all, "full classification pipeline", default_fmt=None)
    p.add_argument("--max-n", dest="max_n", type=int)
    p.add_argument("--max-m", dest="max_m", type=int)
    p.add_argument("--max-f2-n", dest="max_f2_n", type=int)
    p.add_argument("--max-points", dest="max_points", type=int)
    p.add_argument("--axiom-limit", dest="axiom_limit", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--config", help="key=value file mirroring the flags (flags win)")

    _space_args(sub("fischer", "build", cmd_fischer_build, "build a Fischer space"))
    _space_args(sub("matsuo", "analyze", cmd_matsuo_analyze, "form and quotient of a Matsuo algebra"), with_input=True)

    p = sub("griess", "verify", cmd_griess_verify, "compare the Griess algebra with the Matsuo quotient")
    p.add_argument("--family", required=True, choices=["A", "D", "E", "a", "d", "e"])
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--signs", choices=["both", "minus", "minus_only"], default="both")

    sub("bounds", "run-cases", cmd_bounds_run, "evaluate every top-weight bound instance")

    p = sub("reps", "admissible", cmd_reps_admissible, "bipartitions surviving the branching sieve")
    p.add_argument("--n", type=int, required=True)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
