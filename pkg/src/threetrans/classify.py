"""End-to-end replay: build every candidate family, classify its Matsuo form,
eliminate the impossible ones with recorded witnesses, and assemble the table
of surviving (VOA, group) pairs."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Callable

import numpy as np

from .fischer import (
    FischerSpace,
    check_3transposition,
    from_f2_space,
    from_signed_roots,
    from_single_roots,
    is_symplectic_type,
    orthogonal_space,
    srg_spectrum,
    srg_parameters,
    symplectic_space,
    tensor_shell,
    valency,
)
from .matsuo import FormClass, build_matsuo, central_charge, check_axioms, gram_inertia, quotient_dimension
from .roots import build_root_system

F = Fraction
PD = FormClass.POSITIVE_DEFINITE.value
PSD = FormClass.PSD_SINGULAR.value
INDEF = FormClass.INDEFINITE.value


@dataclass
class Config:
    max_n: int = 10
    max_m: int = 3
    max_f2_n: int = 6
    max_points: int = 2100
    axiom_limit: int = 260  # exhaustive axiom checks up to this many points
    threads: int = 1

    @classmethod
    def keys(cls) -> list[str]:
        return [f.name for f in fields(cls)]


# ---------------------------------------------------------------------------
# constructions


def _single(family: str, rank: int) -> FischerSpace:
    return from_single_roots(build_root_system(family, rank))


def _signed(family: str, rank: int) -> FischerSpace:
    return from_signed_roots(build_root_system(family, rank))


def _triangular(n: int) -> FischerSpace:
    """Transpositions of S_n (single A_{n-1}) with its strongly regular spectrum."""
    fs = _single("A", n - 1)
    if n >= 4:
        fs.claimed_spectrum = srg_spectrum(*srg_parameters("sym", n))
    return fs


def _f2(kind: str, n: int) -> FischerSpace:
    if kind == "sp":
        return from_f2_space(symplectic_space(n))
    return from_f2_space(orthogonal_space(n, 1 if kind == "o+" else -1))


def trivial_space() -> FischerSpace:
    return FischerSpace([0], np.zeros((1, 1), dtype=bool), np.full((1, 1), -1, dtype=np.int32), {"name": "1 point", "kind": "trivial"})


def _named(fs: FischerSpace, label: str) -> FischerSpace:
    fs.tag = dict(fs.tag, name=label)
    return fs


# ---------------------------------------------------------------------------
# witnesses: index subsets whose induced space has a rank-deficient form


def _first_copies(copies: int, size: int) -> list[int]:
    return list(range(copies * size))


def sp8_inside(points: list[int], kind: str, half_dim: int) -> list[int]:
    """Indices of a 255-point symplectic 8-space inside Sp_{2N} or O_{2N}^+-.

    Symplectic: nonzero vectors supported on the first 8 coordinates.
    Orthogonal: y + t v0 with y on the first 8 coordinates, v0 the sum of
    the last hyperbolic pair (Q(v0) = 1, v0 orthogonal to y) and t chosen
    so that Q = 1.  In both cases y -> point is an isometry onto Sp_8.
    """
    if half_dim < 5:
        raise ValueError("needs dimension at least 10")
    where = {p: i for i, p in enumerate(points)}
    v0 = (1 << (2 * half_dim - 2)) | (1 << (2 * half_dim - 1))
    out = []
    for y in range(1, 256):
        if kind == "sp":
            out.append(where[y])
        else:
            out.append(where[y] if y in where else where[y | v0])
    return out


# ---------------------------------------------------------------------------
# instances


@dataclass
class Instance:
    family: str
    label: str
    params: dict
    size: int
    role: str  # "survivor" or "eliminated"
    build: Callable[[], FischerSpace] = field(repr=False)
    expected: dict | None = None
    witness: Callable[[FischerSpace], tuple[str, list[int]]] | None = field(default=None, repr=False)
    witness_expected: tuple[int, int] | None = None  # (|I_H|, d_H)


def _survivor(family, label, params, size, build, I, k, d, cls) -> Instance:
    exp = {"I": I, "k": k, "c": str(F(4 * I, k + 8)), "d": d, "form": cls}
    return Instance(family, label, params, size, "survivor", build, exp)


def survivor_instances(cfg: Config) -> list[Instance]:
    out = []
    for n in range(3, cfg.max_n + 2):
        I = n * (n - 1) // 2
        out.append(_survivor("S_n", f"S_{n}", {"n": n}, I, lambda n=n: _named(_triangular(n), f"S_{n}"), I, 2 * (n - 2), I, PD))
    for n in range(4, cfg.max_n + 1):
        I = n * (n - 1)
        out.append(_survivor("F_n:S_n", f"F_{n}:S_{n}", {"n": n}, I, lambda n=n: _named(_signed("A", n - 1), f"F_{n}:S_{n}"), I, 4 * (n - 2), I, PD))
    for n in range(4, cfg.max_n + 1):
        I = 2 * n * (n - 1)
        d = n * (3 * n - 1) // 2
        out.append(_survivor("F_n^2:S_n", f"F_{n}^2:S_{n}", {"n": n}, I, lambda n=n: _named(_signed("D", n), f"F_{n}^2:S_{n}"), I, 8 * (n - 2), d, PSD))
    fixed = [
        ("O6-(2)", lambda: _f2("o-", 3), 36, 20, 36, PD),
        ("2^6:O6-(2)", lambda: _signed("E", 6), 72, 40, 57, PSD),
        ("Sp6(2)", lambda: _f2("sp", 3), 63, 32, 63, PD),
        ("2^6:Sp6(2)", lambda: _signed("E", 7), 126, 64, 91, PSD),
        ("O8+(2)", lambda: _f2("o+", 4), 120, 56, 120, PD),
        ("O8-(2)", lambda: _f2("o-", 4), 136, 72, 85, PSD),
        ("Sp8(2)", lambda: _f2("sp", 4), 255, 128, 120, PSD),
        ("2^8:O8+(2)", lambda: _signed("E", 8), 240, 112, 156, PSD),
        ("O10+(2)", lambda: _f2("o+", 5), 496, 240, 156, PSD),
    ]
    for label, build, I, k, d, cls in fixed:
        out.append(_survivor(label, label, {}, I, lambda b=build, l=label: _named(b(), l), I, k, d, cls))
    return out


def _f2_base(kind: str, n: int) -> tuple[str, int]:
    name = {"sp": f"Sp{2 * n}(2)", "o+": f"O{2 * n}+(2)", "o-": f"O{2 * n}-(2)"}[kind]
    size = srg_parameters(kind, n)[0]
    return name, size


def shell_label(e: int, base: str, m: int) -> str:
    if m == 0:
        return base
    return f"2^{e}:{base}" if m == 1 else f"(2^{e})^{m}:{base}"


def _shell_builder(base: Callable[[], FischerSpace], m: int, label: str):
    def build():
        return _named(tensor_shell(base(), m), label)

    return build


def elimination_instances(cfg: Config) -> tuple[list[Instance], list[dict]]:
    """Returns (in-range instances, skipped rows over the point cap)."""
    cand: list[Instance] = []
    # F_n^m:S_n, m >= 3; witness: the first four copies, i.e. F_n^2:S_n
    for n in range(4, cfg.max_n + 1):
        t = n * (n - 1) // 2
        for m in range(3, cfg.max_m + 1):
            cand.append(
                Instance(
                    "F_n^m:S_n", f"F_{n}^{m}:S_{n}", {"n": n, "m": m}, (1 << m) * t, "eliminated",
                    _shell_builder(lambda n=n: _triangular(n), m, f"F_{n}^{m}:S_{n}"),
                    witness=lambda fs, t=t, n=n: (f"F_{n}^2:S_{n}", _first_copies(4, t)),
                    witness_expected=(4 * t, n * (3 * n - 1) // 2),
                )
            )
    # shells over a small F2 space; witness: the first `wc` copies
    shells = [
        ("(2^6)^m:O6-(2)", "o-", 3, 2, 2, "2^6:O6-(2)", 57),
        ("(2^6)^m:Sp6(2)", "sp", 3, 2, 2, "2^6:Sp6(2)", 91),
        ("(2^8)^m:O8+(2)", "o+", 4, 2, 2, "2^8:O8+(2)", 156),
        ("(2^8)^m:O8-(2)", "o-", 4, 1, 1, "O8-(2)", 85),
        ("(2^8)^m:Sp8(2)", "sp", 4, 1, 1, "Sp8(2)", 120),
    ]
    for fam, kind, n, m0, wc, wname, wd in shells:
        base_name, v = _f2_base(kind, n)
        for m in range(m0, cfg.max_m + 1):
            label = shell_label(2 * n, base_name, m)
            cand.append(
                Instance(
                    fam, label, {"m": m}, (1 << m) * v, "eliminated",
                    _shell_builder(lambda k=kind, n=n: _f2(k, n), m, label),
                    witness=lambda fs, wc=wc, v=v, wname=wname: (wname, _first_copies(wc, v)),
                    witness_expected=(wc * v, wd),
                )
            )
    # large F2 spaces and their shells; witness: a symplectic 8-space in copy 0
    big = [("(2^10)^m:O10+(2)", "o+", 5, 1)]
    for n in range(5, cfg.max_f2_n + 1):
        big.append((f"(2^{2 * n})^m:O{2 * n}-(2)", "o-", n, 0))
        big.append((f"(2^{2 * n})^m:Sp{2 * n}(2)", "sp", n, 0))
    for n in range(6, cfg.max_f2_n + 1):
        big.append((f"(2^{2 * n})^m:O{2 * n}+(2)", "o+", n, 0))
    for fam, kind, n, m0 in big:
        base_name, v = _f2_base(kind, n)
        for m in range(m0, cfg.max_m + 1):
            label = shell_label(2 * n, base_name, m)

            def build(kind=kind, n=n, m=m, label=label):
                base = _f2(kind, n)
                return _named(base if m == 0 else tensor_shell(base, m), label)

            def witness(fs, kind=kind, n=n, v=v):
                pts = fs.points[:v] if fs.tag.get("kind") == "shell" else fs.points
                pts = [p[1] if isinstance(p, tuple) else p for p in pts]
                return "Sp8(2)", sp8_inside(pts, kind, n)

            cand.append(Instance(fam, label, {"n": n, "m": m}, (1 << m) * v, "eliminated", build, witness=witness, witness_expected=(255, 120)))
    kept = [c for c in cand if c.size <= cfg.max_points]
    skipped = [{"family": c.family, "group": c.label, "I": c.size, "reason": f"exceeds point cap {cfg.max_points}"} for c in cand if c.size > cfg.max_points]
    return kept, skipped


# ---------------------------------------------------------------------------
# analysis of one instance


def analyze(inst: Instance, cfg: Config) -> dict:
    fs = inst.build()
    alg = build_matsuo(fs)
    I = fs.n
    k = valency(fs)
    iner = gram_inertia(alg)
    d = iner.positive + iner.negative
    cls = INDEF if iner.negative else (PSD if iner.zero else PD)
    row: dict = {
        "family": inst.family,
        "group": inst.label,
        "params": inst.params,
        "I": I,
        "k": k,
        "c": str(central_charge(alg)),
        "d": d,
        "inertia": [iner.positive, iner.zero, iner.negative],
        "form": cls,
        "connected": fs.is_connected(),
    }
    if fs.tau is not None and I <= cfg.axiom_limit:
        ok = bool(check_3transposition(fs)) and is_symplectic_type(fs) and bool(check_axioms(alg))
        row["axioms"] = "pass" if ok else "FAIL"
    else:
        row["axioms"] = "not checked"
    criteria = []
    if iner.zero == 0:
        criteria.append("gram_nonsingular")
    if iner.negative:
        criteria.append("indefinite")
    if inst.witness is not None:
        wname, subset = inst.witness(fs)
        sub = fs.induced(subset, wname)
        d_h = quotient_dimension(build_matsuo(sub))
        row["witness"] = {"group": wname, "I": sub.n, "d": d_h}
        if d_h < sub.n and iner.zero == 0:
            criteria.append("subfamily_rank_deficit")
    row["criteria"] = criteria
    if inst.role == "survivor":
        row["verdict"] = "survivor" if cls != INDEF else "eliminated"
    else:
        row["verdict"] = "eliminated" if criteria and ("indefinite" in criteria or "subfamily_rank_deficit" in criteria) else "survivor"
    row["problems"] = _problems(inst, row)
    return row


def _problems(inst: Instance, row: dict) -> list[str]:
    out = []
    if not row["connected"]:
        out.append("space is not connected")
    if row["axioms"] == "FAIL":
        out.append("axiom check failed")
    if row["verdict"] != inst.role:
        out.append(f"verdict {row['verdict']} but expected {inst.role}")
    if inst.expected:
        for key, want in inst.expected.items():
            got = row["c"] if key == "c" else row["form"] if key == "form" else row[key]
            if got != want:
                out.append(f"{key}: got {got}, expected {want}")
    if inst.witness_expected is not None:
        w = row.get("witness", {})
        if (w.get("I"), w.get("d")) != inst.witness_expected:
            out.append(f"witness (|I|, d) = {(w.get('I'), w.get('d'))}, expected {inst.witness_expected}")
    return out


def _run(insts: list[Instance], cfg: Config) -> list[dict]:
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            return list(ex.map(lambda i: analyze(i, cfg), insts))
    return [analyze(i, cfg) for i in insts]


# ---------------------------------------------------------------------------
# reports

POSITIVE_DEFINITE_LIST = ("S_n", "F_n:S_n", "O6-(2)", "Sp6(2)", "O8+(2)")
SINGULAR_LIST = ("F_n^2:S_n", "2^6:O6-(2)", "2^6:Sp6(2)", "O8-(2)", "Sp8(2)", "2^8:O8+(2)", "O10+(2)")


def reproduce_lemma_6_1(max_n: int = 10, threads: int = 1) -> dict:
    if max_n < 4:
        raise ValueError("max_n must be at least 4")
    cfg = Config(max_n=max_n, threads=threads, axiom_limit=0)
    rows = _run(survivor_instances(cfg), cfg)
    pd = sorted({r["family"] for r in rows if r["form"] == PD})
    psd = sorted({r["family"] for r in rows if r["form"] == PSD})
    mixed = sorted(set(pd) & set(psd))
    indefinite = sorted(r["group"] for r in rows if r["form"] == INDEF)
    ok = pd == sorted(POSITIVE_DEFINITE_LIST) and psd == sorted(SINGULAR_LIST) and not mixed and not indefinite
    return {
        "rows": [{"group": r["group"], "family": r["family"], "form": r["form"], "inertia": r["inertia"]} for r in rows],
        "positive_definite": pd,
        "psd_singular": psd,
        "matches": ok,
    }


def run_eliminations(max_m: int = 3, max_n: int = 6, max_f2_n: int = 6, max_points: int = 2100, threads: int = 1) -> dict:
    if max_m < 3 or max_n < 6:
        raise ValueError("bounds must be at least (max_m, max_n) = (3, 6)")
    cfg = Config(max_n=max_n, max_m=max_m, max_f2_n=max_f2_n, max_points=max_points, threads=threads, axiom_limit=0)
    insts, skipped = elimination_instances(cfg)
    rows = _run(insts, cfg)
    return {"rows": rows, "skipped": skipped, "matches": all(not r["problems"] for r in rows)}


# pair table ----------------------------------------------------------------

PAIRS = (
    # (VOA, G_V, families whose generating groups give this pair)
    ("K(A_1,2)", "id", ("trivial",)),
    ("K(A_n,2)", "S_{n+1}", ("S_n",)),
    ("V+_sqrt2A_n", "F_{n+1}:S_{n+1}", ("F_n:S_n",)),
    ("V+_sqrt2D_n", "F_n^2:S_n", ("F_n^2:S_n",)),
    ("K(E_6,2)", "O6-(2)", ("O6-(2)",)),
    ("K(E_7,2)", "Sp6(2)", ("Sp6(2)",)),
    ("K(E_8,2)", "Sp8(2)", ("Sp8(2)", "O8+(2)")),
    ("V+_sqrt2E_6", "2^6:O6-(2)", ("2^6:O6-(2)",)),
    ("V+_sqrt2E_7", "2^6:Sp6(2)", ("2^6:Sp6(2)",)),
    ("Com(K(A_2,2),V+_sqrt2E_8)", "O8-(2)", ("O8-(2)",)),
    ("V+_sqrt2E_8", "O10+(2)", ("O10+(2)", "2^8:O8+(2)")),
)
PAIR_OF = {fam: (voa, gv) for voa, gv, fams in PAIRS for fam in fams}
COINCIDENCES = (("O8+(2)", "Sp8(2)", 120), ("2^8:O8+(2)", "O10+(2)", 156))


def _trivial_row() -> dict:
    fs = trivial_space()
    alg = build_matsuo(fs)
    iner = gram_inertia(alg)
    return {
        "family": "trivial",
        "group": "1",
        "params": {},
        "I": 1,
        "k": 0,
        "c": str(central_charge(alg)),
        "d": iner.positive,
        "inertia": [iner.positive, iner.zero, iner.negative],
        "form": PD if iner.positive == 1 else INDEF,
        "connected": True,
        "axioms": "pass" if check_axioms(alg) else "FAIL",
        "criteria": [],
        "verdict": "survivor",
        "problems": [] if central_charge(alg) == F(1, 2) else ["trivial central charge is not 1/2"],
    }


def classify_all(cfg: Config | None = None) -> dict:
    cfg = cfg or Config()
    surv = survivor_instances(cfg)
    elim, skipped = elimination_instances(cfg)
    rows = [_trivial_row()] + _run(surv + elim, cfg)
    survivors = [r for r in rows if r["verdict"] == "survivor"]
    eliminated = [r for r in rows if r["verdict"] == "eliminated"]
    problems = [f"{r['group']}: {p}" for r in rows for p in r["problems"]]

    pair_rows = []
    for voa, gv, fams in PAIRS:
        hits = [r for r in survivors if r["family"] in fams]
        pair_rows.append(
            {
                "voa": voa,
                "G_V": gv,
                "generating_groups": [r["group"] for r in hits],
                "c": sorted({r["c"] for r in hits}, key=F),
                "d": sorted({r["d"] for r in hits}),
            }
        )
        if not hits:
            problems.append(f"pair {voa} not realised by any tested family")
    stray = sorted({r["family"] for r in survivors} - set(PAIR_OF))
    problems += [f"unexpected survivor family {s}" for s in stray]

    by_group = {r["group"]: r for r in rows}
    coincide = []
    for a, b, d in COINCIDENCES:
        da, db = by_group[a]["d"], by_group[b]["d"]
        coincide.append({"groups": [a, b], "d": [da, db]})
        if not da == db == d:
            problems.append(f"quotient dimensions of {a} and {b} are {da}, {db}; expected {d}")

    return {
        "config": {k: v for k, v in asdict(cfg).items() if k != "threads"},
        "rows": rows,
        "survivor_table": pair_rows,
        "eliminated": [r["group"] for r in eliminated],
        "skipped": skipped,
        "coincidences": coincide,
        "problems": problems,
        "ok": not problems,
    }


# ---------------------------------------------------------------------------
# rendering

COLUMNS = ("group", "I", "k", "c", "d", "form", "verdict", "criteria")


def render(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=1) + "\n"
    rows = [[_cell(r.get(c)) for c in COLUMNS] for r in report["rows"]]
    pairs = [[p["voa"], p["G_V"], " ".join(p["generating_groups"])] for p in report["survivor_table"]]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        w.writerows(rows)
        w.writerow([])
        w.writerow(["voa", "G_V", "generating_groups"])
        w.writerows(pairs)
        return buf.getvalue()
    if fmt == "md":
        lines = ["| " + " | ".join(COLUMNS) + " |", "|" + "---|" * len(COLUMNS)]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
        lines += ["", "| VOA | G_V | generating groups |", "|---|---|---|"]
        lines += ["| " + " | ".join(p) + " |" for p in pairs]
        if report.get("problems"):
            lines += ["", "Problems:"] + [f"- {p}" for p in report["problems"]]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _cell(v) -> str:
    if isinstance(v, list):
        return ";".join(str(x) for x in v)
    return "" if v is None else str(v)
