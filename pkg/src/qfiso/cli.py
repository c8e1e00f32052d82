"""Command-line interface.

Exit codes: 0 success/pass, 1 verified-false, 2 usage, 3 budget exceeded,
4 undecided.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .arith import primes_up_to
from .binform import Form, class_group, compose_forms, form_class, reduce
from .isolation import (
    BudgetExceeded,
    load_table1,
    saturation_audit,
    search_candidates,
    verify_many,
    write_table1,
)
from .lattice import Lattice, has_norm_p_binary_sublattice, represents_lattice, vectors_with_norm
from .represent import (
    all_solutions_count,
    primitive_count,
    psi,
    represented_by_genus,
    solutions,
    total_rep_count,
)
from .theorems import HARNESSES, Grid, check_cor_quat_and_4square

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET, EXIT_UNKNOWN = 0, 1, 2, 3, 4

CONFIG_ENV = "QFISO_CONFIG"


@dataclass
class Config:
    p_max: int = 149
    d_max: int = 200
    n_max: int = 100
    grid_p_max: int = 50
    format: str = "text"
    dataset: str | None = None
    threads: int = 1
    budget: int = 2_000_000

    def __post_init__(self):
        for name in ("p_max", "d_max", "n_max", "grid_p_max", "threads", "budget"):
            if getattr(self, name) <= 0:
                raise ValueError(f"config value {name} must be positive")
        if self.format not in ("json", "text"):
            raise ValueError(f"format must be json or text, got {self.format!r}")

    @classmethod
    def load(cls, path: str | None) -> "Config":
        if path is None:
            return cls()
        data = json.loads(Path(path).read_text())
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


class UsageError(Exception):
    pass


def _parse_form(text: str) -> Form:
    text = text.strip()
    if text.startswith("["):
        return Form(*json.loads(text))
    return Form.parse(text)


def _parse_lattice(text: str) -> Lattice:
    text = text.strip()
    if text.startswith("["):
        return Lattice.from_json(json.loads(text))
    return Lattice(text)


def _emit(cfg: Config, payload: dict, text: str) -> None:
    if cfg.format == "json":
        print(json.dumps(payload, indent=1, sort_keys=False))
    else:
        print(text)


# ---------------------------------------------------------------- commands


def cmd_classgroup(args, cfg: Config) -> int:
    G = class_group(args.D)
    amb = [str(x) for x, f in zip(G.elements, G.ambiguous_flags) if f]
    payload = {
        "schema_version": 1,
        "D": G.D,
        "h": G.h,
        "structure": G.structure(),
        "forms": [list(x.repr) for x in G.elements],
        "orders": list(G.orders),
        "ambiguous": [list(x.repr) for x, f in zip(G.elements, G.ambiguous_flags) if f],
        "genera": [[list(x.repr) for x in g] for g in G.genera],
        "table": [list(r) for r in G.table],
    }
    lines = [
        f"D = {G.D}   h = {G.h}   group: {G.structure_str()}",
        "classes (index: form, order):",
        *(f"  {i}: {x}  order {o}" for i, (x, o) in enumerate(zip(G.elements, G.orders))),
        f"ambiguous: {', '.join(amb)}",
        f"genera ({len(G.genera)}): " + " | ".join(" ".join(str(x) for x in g) for g in G.genera),
        "composition table:",
        *("  " + " ".join(f"{v:>2}" for v in row) for row in G.table),
    ]
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK


def cmd_compose(args, cfg: Config) -> int:
    f1, f2 = _parse_form(args.f1), _parse_form(args.f2)
    if f1.disc != args.D or f2.disc != args.D:
        raise UsageError(f"forms have discriminants {f1.disc}, {f2.disc}; expected {args.D}")
    x, y = form_class(f1), form_class(f2)
    united = compose_forms(x.repr, y.repr)
    red, T = reduce(united)
    payload = {
        "D": args.D,
        "x": list(x.repr),
        "y": list(y.repr),
        "united": list(united),
        "transform": [list(r) for r in T],
        "product": list(red),
    }
    text = f"{x.repr} * {y.repr}: united form {united} -> reduced {red} via {T}"
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_represent(args, cfg: Config) -> int:
    if args.form:
        f = _parse_form(args.form)
        if args.n is None:
            raise UsageError("--form needs --n")
        sols = solutions(f, args.n)
        payload = {
            "form": list(f),
            "n": args.n,
            "represented": bool(sols),
            "solutions": [[s.x, s.y, s.primitive] for s in sols],
        }
        if f.is_primitive():
            C = form_class(f)
            payload["by_genus"] = represented_by_genus(args.n, C, class_group(f.disc))
        text = f"{args.n} -> {f}: {bool(sols)} ({len(sols)} solutions)"
        if "by_genus" in payload:
            text += f"; by genus: {payload['by_genus']}"
        _emit(cfg, payload, text)
        return EXIT_OK if sols else EXIT_FALSE
    if not args.lattice:
        raise UsageError("give --form or --lattice")
    L = _parse_lattice(args.lattice)
    if args.target:
        M = _parse_lattice(args.target)
        E = represents_lattice(L, M)
        payload = {
            "lattice": L.to_json(),
            "target": M.to_json(),
            "represented": E is not None,
            "embedding": E.to_json() if E else None,
        }
        _emit(cfg, payload, f"represented: {E is not None}" + (f"  T = {E.to_json()}" if E else ""))
        return EXIT_OK if E else EXIT_FALSE
    if args.n is None:
        raise UsageError("--lattice needs --target or --n")
    vs = vectors_with_norm(L, args.n)
    payload = {"lattice": L.to_json(), "n": args.n, "count": len(vs), "vectors": [list(v) for v in vs]}
    _emit(cfg, payload, f"{len(vs)} vectors of norm {args.n}")
    return EXIT_OK if vs else EXIT_FALSE


def cmd_psi(args, cfg: Config) -> int:
    value, brute = psi(args.n, args.D), primitive_count(args.n, args.D)
    total, total_brute = total_rep_count(args.n, args.D), all_solutions_count(args.n, args.D)
    ok = value == brute and total == total_brute
    payload = {
        "D": args.D,
        "n": args.n,
        "psi": value,
        "brute_force": brute,
        "total_formula": total,
        "total_brute_force": total_brute,
        "agree": ok,
    }
    text = (
        f"psi({args.n}; D={args.D}) = {value} primitive (brute force {brute}); "
        f"all representations {total} (brute force {total_brute}); agree: {ok}"
    )
    _emit(cfg, payload, text)
    return EXIT_OK if ok else EXIT_FALSE


def cmd_theorems(args, cfg: Config) -> int:
    grid = Grid(d_max=cfg.d_max, n_max=cfg.n_max, p_max=cfg.grid_p_max)
    wanted = list(HARNESSES) + ["cor-quat-and-4square"] if args.statement == "all" else [args.statement]
    reports = []
    for sid in wanted:
        if sid == "cor-quat-and-4square":
            reports.append(check_cor_quat_and_4square(load_table1(cfg.dataset)))
        elif sid in HARNESSES:
            reports.append(HARNESSES[sid](grid))
        else:
            raise UsageError(f"unknown statement {sid!r}; choose from {sorted(HARNESSES)} or cor-quat-and-4square")
    payload = {"schema_version": 1, "reports": [r.to_json(timing=args.timing) for r in reports]}
    _emit(cfg, payload, "\n".join(r.text() for r in reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FALSE


def cmd_verify_table1(args, cfg: Config) -> int:
    records = load_table1(cfg.dataset)
    if args.row:
        records = [r for r in records if r.row in args.row]
    if args.id:
        records = [r for r in records if r.id in args.id]
    results = verify_many(records, cfg.p_max, threads=cfg.threads)
    doc = {
        "schema_version": 1,
        "p_max": cfg.p_max,
        "results": [r.to_json(witnesses=args.witnesses) for r in results],
    }
    if args.results:
        full = {"schema_version": 1, "p_max": cfg.p_max, "results": [r.to_json() for r in results]}
        Path(args.results).write_text(json.dumps(full) + "\n")
    lines = [
        f"{r.candidate_id}: verified={r.verified} misses_base={r.non_representation_of_base} "
        f"failing_primes={r.failing_primes}"
        for r in results
    ]
    _emit(cfg, doc, "\n".join(lines))
    return EXIT_OK if all(r.verified for r in results) else EXIT_FALSE


def cmd_search(args, cfg: Config) -> int:
    base = _parse_lattice(args.base)
    found = search_candidates(base, args.disc_bound, args.p_max or 13, budget=cfg.budget)
    payload = {
        "schema_version": 1,
        "base": base.to_json(),
        "disc_bound": args.disc_bound,
        "records": [r.to_json() for r in found],
    }
    lines = [f"{len(found)} candidates"] + [f"  disc {r.stated_disc}: {r.candidate}" for r in found]
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK


def cmd_audit(args, cfg: Config) -> int:
    records = load_table1(cfg.dataset)
    if args.row:
        records = [r for r in records if r.row in args.row]
    primes = [args.p] if args.p else primes_up_to(cfg.p_max)
    audits = [saturation_audit(r, p) for r in records for p in primes]
    payload = {"schema_version": 1, "audits": [a.to_json() for a in audits]}
    lines = [
        f"{a.candidate_id} p={a.p}: {a.status}"
        + (f" ({a.reason})" if a.reason else f" t={[e.t for e in a.entries]}")
        for a in audits
    ]
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_FALSE if any(a.status == "fail" for a in audits) else EXIT_OK


def cmd_norm_p(args, cfg: Config) -> int:
    L = _parse_lattice(args.lattice)
    res = has_norm_p_binary_sublattice(L, args.p, args.bound)
    payload = {"lattice": L.to_json(), "p": args.p, "status": res.status, "witness": res.witness, "bound": res.bound}
    _emit(cfg, payload, f"{res.status}" + (f": basis columns {res.witness}" if res.witness else ""))
    return {"found": EXIT_OK, "absent": EXIT_FALSE, "unknown": EXIT_UNKNOWN}[res.status]


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qfiso", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    ap.add_argument("--format", choices=["json", "text"])
    ap.add_argument("--threads", type=int)
    ap.add_argument("--dataset", help="Table 1 dataset path (default: bundled)")
    ap.add_argument(
        "--seed-dataset",
        nargs="?",
        const="",
        metavar="PATH",
        help="regenerate the Table 1 JSON from the embedded copy (default: bundled file) and exit",
    )
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("classgroup", help="class group of discriminant D")
    p.add_argument("D", type=int)
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("compose", help="compose two forms of discriminant D")
    p.add_argument("D", type=int)
    p.add_argument("f1", help="a,b,c")
    p.add_argument("f2", help="a,b,c")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("represent", help="representation queries")
    p.add_argument("--form", help="binary form a,b,c")
    p.add_argument("--lattice", help="Gram matrix, rows separated by ';', e.g. '2,1/2;1/2,3'")
    p.add_argument("--target", help="target Gram matrix")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("psi", help="closed-form primitive representation count with brute-force check")
    p.add_argument("D", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("theorems", help="run statement harnesses")
    p.add_argument("statement", nargs="?", default="all")
    p.add_argument("--d-max", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--p-max", type=int, dest="grid_p_max")
    p.add_argument("--timing", action="store_true", help="include elapsed times in JSON")
    p.set_defaults(func=cmd_theorems)

    p = sub.add_parser("verify-table1", help="verify the Table 1 candidates")
    p.add_argument("--p-max", type=int)
    p.add_argument("--row", type=int, action="append")
    p.add_argument("--id", action="append")
    p.add_argument("--witnesses", action="store_true", help="include embeddings in printed JSON")
    p.add_argument("--results", help="write the full results JSON here")
    p.set_defaults(func=cmd_verify_table1)

    p = sub.add_parser("search", help="search for quaternary candidates for a binary base lattice")
    p.add_argument("--base", required=True)
    p.add_argument("--disc-bound", type=int, required=True)
    p.add_argument("--p-max", type=int, dest="search_p_max")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("audit", help="saturation audit of Table 1 candidates")
    p.add_argument("--p", type=int, help="a single prime (default: all primes up to --p-max)")
    p.add_argument("--p-max", type=int)
    p.add_argument("--row", type=int, action="append")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("norm-p", help="search a primitive binary sublattice with norm in pZ")
    p.add_argument("--lattice", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--bound", type=int)
    p.set_defaults(func=cmd_norm_p)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        cfg = Config.load(args.config or os.environ.get(CONFIG_ENV))
        overrides = {
            k: v
            for k, v in {
                "format": args.format,
                "threads": args.threads,
                "dataset": args.dataset,
                "p_max": getattr(args, "p_max", None),
                "d_max": getattr(args, "d_max", None),
                "n_max": getattr(args, "n_max", None),
                "grid_p_max": getattr(args, "grid_p_max", None),
                "budget": getattr(args, "budget", None),
            }.items()
            if v is not None
        }
        cfg = Config(**{**asdict(cfg), **overrides})
    except (ValueError, OSError, json.JSONDecodeError) as e:
        print(f"qfiso: config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.seed_dataset is not None:
        if args.seed_dataset:
            path = Path(args.seed_dataset)
        else:
            path = Path(__file__).parent / "data" / "table1.json"
        write_table1(path)
        print(f"wrote {path}")
        return EXIT_OK
    if not args.command:
        ap.print_help(sys.stderr)
        return EXIT_USAGE
    if args.command == "search":
        args.p_max = args.search_p_max
    try:
        return args.func(args, cfg)
    except UsageError as e:
        print(f"qfiso: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"qfiso: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as e:
        print(f"qfiso: invalid input: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
