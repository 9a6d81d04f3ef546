"""Command-line entry point.

Exit codes: 0 when every audit passes (singular projector weights only warn),
1 when some audit fails, 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Callable, List, Optional, Sequence

from . import __version__
from .branching import audit_channel
from .cache import HARMONIC_KINDS, SubspaceCache, default_cache_dir, harmonic_space
from .dsl import DSLError, compile_map, parse_op, elaborate
from .kernels import fischer_audit, is_dominant, kernel_characterization_audit, weyl_dim_so
from .poly import DimensionError, Polynomial, poly_from_json, poly_to_json, to_text
from .realizations import SUITES, run_suites
from .transvector import ProjectorContext, SingularWeight
from .weyl import bigrade, to_dsl, weyl_to_json

REPORT_SCHEMA = "report-v1"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2



class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    args: dict
    fmt: str = "json"
    cache_dir: Optional[str] = None
    jobs: int = 1


@dataclass
class Report:
    command: str
    config: dict
    rows: List[dict] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    csv_columns: Sequence[str] = ()
    extra: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(r.get("status") == "fail" for r in self.rows)

    def to_json(self) -> dict:
        out = {"schema": REPORT_SCHEMA, "command": self.command, "config": self.config,
               "status": "fail" if self.failed else "pass", "rows": self.rows,
               "warnings": self.warnings}
        out.update(self.extra)
        return out


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# argument parsing helpers


def parse_int_range(text: str) -> List[int]:
    """``"3"``, ``"-4..1"`` or ``"1,3,5"`` to a nonempty list of ints."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if lo > hi:
                raise ConfigError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"cannot read integer range {text!r}") from None
    if not vals:
        raise ConfigError("empty range")
    return vals


def parse_triple(text: str) -> tuple:
    try:
        vals = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise ConfigError(f"cannot read degree {text!r}") from None
    if len(vals) != 3 or min(vals) < 0:
        raise ConfigError(f"degree must be three nonnegative integers, got {text!r}")
    return vals


def _ms(text: str) -> List[int]:
    ms = parse_int_range(text)
    if min(ms) < 1:
        raise ConfigError("m must be at least 1")
    return ms


# worker tasks (module level so they pickle)


def _task_verify(m: int, suites: tuple) -> List[dict]:
    rows = []
    for rec in run_suites(suites, m):
        rows.append({"m": m, "check": rec["check"], "status": _status(rec["pass"]),
                     "details": rec.get("details", [])})
    return rows


def _task_kernel_check(m: int, d: tuple, projected: bool) -> dict:
    rep = kernel_characterization_audit(m, d, projected=projected)
    ok = rep["equal"]
    if projected and "projected_equal" in rep:
        ok = ok and rep["projected_equal"]
    rep["status"] = _status(ok)
    return rep


def _task_fischer(m: int, max_k: int) -> List[dict]:
    rows = fischer_audit(m, max_k)
    for r in rows:
        r["status"] = _status(r.pop("pass"))
    return rows


def _task_branch(m: int, lam: int, word_cap: int) -> dict:
    rep = audit_channel(m, lam, word_cap)
    rep["m"] = m
    ok = (rep["complete"] and rep["independent"] and rep["word_cap_invariant"]
          and rep["certified"] and rep["in_channel"] and rep["single_parity"])
    rep["status"] = _status(ok)
    return rep


def orthogonal_group_dim(m: int, weight) -> Optional[int]:
    """Dimension of the O(m)-irreducible with this diagram, when it has at most m/2 rows."""
    rows = sum(1 for v in weight if v)
    if rows > m // 2:
        return None
    d = weyl_dim_so(m, weight)
    return 2 * d if m % 2 == 0 and rows == m // 2 and rows > 0 else d


def _task_dims(m: int, d: tuple, cache_dir: Optional[str]) -> dict:
    cache = SubspaceCache(Path(cache_dir)) if cache_dir else None
    dim = harmonic_space(cache, "simplicial", m, d).dim
    try:
        weyl = weyl_dim_so(m, d)
    except ValueError:
        weyl = None
    row = {"m": m, "weight": list(d), "simplicial_dim": dim, "weyl_dim": weyl,
           "orthogonal_dim": orthogonal_group_dim(m, d) if weyl is not None else None}
    row["status"] = "n/a" if weyl is None else _status(dim == weyl)
    return row


def _run_tasks(fn: Callable, tasks: Sequence[tuple], jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*tasks)))


def _flatten(results: list) -> List[dict]:
    out = []
    for r in results:
        out.extend(r if isinstance(r, list) else [r])
    return out


# commands


def cmd_verify(cfg: RunConfig) -> Report:
    a = cfg.args
    rep = Report("verify", {"m": a["m"], "suite": a["suite"], "expr": a["expr"]},
                 csv_columns=("m", "check", "status"))
    if a["expr"]:
        for m in a["m"]:
            residual = elaborate(parse_op(a["expr"]), m)
            rep.rows.append({"m": m, "check": f"{a['expr']} == 0", "status": _status(residual.is_zero()),
                             "residual": to_dsl(residual)})
    if a["suite"]:
        tasks = [(m, tuple(a["suite"])) for m in a["m"]]
        rep.rows.extend(_flatten(_run_tasks(_task_verify, tasks, cfg.jobs)))
    return rep


def cmd_parse(cfg: RunConfig) -> Report:
    a = cfg.args
    m = a["m"]
    expr = parse_op(a["expr"])
    rep = Report("parse", {"m": m, "expr": a["expr"], "apply": a["apply"]},
                 csv_columns=("m", "dsl", "bigrade"))
    row = {"m": m, "status": "pass"}
    try:
        A = elaborate(expr, m)
        row.update({"dsl": to_dsl(A), "bigrade": list(bigrade(A)) if bigrade(A) else None,
                    "operator": weyl_to_json(A)})
    except DSLError:
        if not a["apply"]:
            raise
        row.update({"dsl": None, "bigrade": None})
    if a["apply"]:
        p = elaborate(parse_op(a["apply"]), m).apply(Polynomial.one(m))
        try:
            q = compile_map(expr, m)(p)
        except SingularWeight as exc:
            rep.warnings.append(str(exc))
            row["status"] = "singular"
        else:
            row["result"] = poly_to_json(q)
            row["result_text"] = to_text(q)
    rep.rows.append(row)
    return rep


def cmd_project(cfg: RunConfig) -> Report:
    a = cfg.args
    if a["input"]:
        obj = json.loads(Path(a["input"]).read_text())
        p = poly_from_json(obj)
    elif a["poly"]:
        p = elaborate(parse_op(a["poly"]), a["m"] or 1).apply(Polynomial.one(a["m"] or 1))
    else:
        raise ConfigError("project needs --input or --poly")
    if a["m"] is not None and a["m"] != p.m:
        raise ConfigError(f"--m {a['m']} does not match the input (m={p.m})")
    ctx = ProjectorContext(p.m)
    rep = Report("project", {"m": p.m, "triple": a["triple"]}, csv_columns=("m", "triple", "status", "text"))
    row = {"m": p.m, "triple": a["triple"], "input": poly_to_json(p)}
    try:
        if a["triple"] == "ds":
            q = ctx.pi_ds(p)
        elif a["triple"] == "l":
            q = ctx.pi_l(p)
        else:
            q = ctx.pi_so4(p)
    except SingularWeight as exc:
        rep.warnings.append(str(exc))
        row.update({"status": "singular", "singular": {"component": list(exc.degree), "h": str(exc.h)}})
    else:
        row.update({"status": "pass", "result": poly_to_json(q), "text": to_text(q),
                    "certificate": ctx.certify(q)})
    rep.rows.append(row)
    return rep


def cmd_harmonics(cfg: RunConfig) -> Report:
    a = cfg.args
    cache = SubspaceCache(Path(cfg.cache_dir)) if cfg.cache_dir else None
    space = harmonic_space(cache, a["kind"], a["m"], a["deg"])
    rep = Report("harmonics", {"m": a["m"], "deg": list(a["deg"]), "kind": a["kind"]},
                 csv_columns=("m", "deg", "kind", "dim"))
    rep.rows.append({"m": a["m"], "deg": list(a["deg"]), "kind": a["kind"], "dim": space.dim,
                     "status": "pass"})
    rep.extra["basis"] = [poly_to_json(b) for b in space.basis]
    return rep


def _degrees_upto(bound: tuple) -> List[tuple]:
    return list(product(*(range(v + 1) for v in bound)))


def cmd_kernel_check(cfg: RunConfig) -> Report:
    a = cfg.args
    tasks = [(m, d, a["projected"]) for m in a["m"] for d in _degrees_upto(a["max_deg"])]
    rep = Report("kernel-check", {"m": a["m"], "max_deg": list(a["max_deg"]), "projected": a["projected"]},
                 csv_columns=("m", "deg", "lhs_dim", "rhs_dim", "equal", "status"))
    rep.rows = _run_tasks(_task_kernel_check, tasks, cfg.jobs)
    for r in rep.rows:
        if "projected_singular" in r:
            rep.warnings.append(f"m={r['m']} deg={r['deg']}: {r['projected_singular']}")
    return rep


def cmd_fischer(cfg: RunConfig) -> Report:
    a = cfg.args
    rep = Report("fischer", {"m": a["m"], "max_k": a["max_k"]},
                 csv_columns=("m", "dims", "t", "dim_P", "rank", "status"))
    rows = _flatten(_run_tasks(_task_fischer, [(m, a["max_k"]) for m in a["m"]], cfg.jobs))
    for r in rows:
        r["dims"] = "+".join(str(v) for v in r["harmonic_dims"])
    rep.rows = rows
    return rep


def cmd_branch(cfg: RunConfig) -> Report:
    a = cfg.args
    if a["word_cap"] < 1:
        raise ConfigError("--word-cap must be at least 1")
    tasks = [(m, lam, a["word_cap"]) for m in a["m"] for lam in sorted(a["lambda"], reverse=True)]
    rep = Report("branch-k1", {"m": a["m"], "lambda": a["lambda"], "word_cap": a["word_cap"]},
                 csv_columns=("m", "lambda", "kernel_dim", "sum_rank", "complete", "independent", "status"))
    rep.rows = _run_tasks(_task_branch, tasks, cfg.jobs)
    for r in rep.rows:
        for s in r["singular"]:
            rep.warnings.append(f"m={r['m']} lambda={r['lambda']}: singular projector weight "
                                f"h={s['h']} for {s['tag']} (a={s['a']}, ell={s['ell']})")
    return rep


def cmd_dims(cfg: RunConfig) -> Report:
    a = cfg.args
    weights = [d for d in _degrees_upto(a["max_deg"]) if is_dominant(d)]
    tasks = [(m, d, cfg.cache_dir) for m in a["m"] for d in weights]
    rep = Report("dims", {"m": a["m"], "max_deg": list(a["max_deg"])},
                 csv_columns=("m", "weight", "simplicial_dim", "weyl_dim", "orthogonal_dim", "status"))
    rep.rows = _run_tasks(_task_dims, tasks, cfg.jobs)
    return rep


COMMANDS = {
    "verify": cmd_verify,
    "parse": cmd_parse,
    "project": cmd_project,
    "harmonics": cmd_harmonics,
    "kernel-check": cmd_kernel_check,
    "fischer": cmd_fischer,
    "branch-k1": cmd_branch,
    "dims": cmd_dims,
}


# output


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return " ".join(str(x) for x in v)
    return "" if v is None else str(v)


def render(rep: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep.to_json(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(rep.csv_columns)
        for r in rep.rows:
            w.writerow([_cell(r.get(c)) for c in rep.csv_columns])
        return buf.getvalue()
    lines = []
    for r in rep.rows:
        fields = " ".join(f"{c}={_cell(r.get(c))}" for c in rep.csv_columns if c != "status")
        lines.append(f"{r.get('status', '').upper():8s} {fields}")
    lines.append(f"{rep.command}: {'FAIL' if rep.failed else 'PASS'} ({len(rep.rows)} rows)")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--cache-dir", default=None,
                        help="cache directory (default: $MZBRANCH_CACHE_DIR, unset means no cache)")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--output", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="mzbranch", description="Exact audits of symplectic Dirac operator algebras.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="operator identity suites")
    p.add_argument("--suite", default="sl2,so4,reductive,invariance")
    p.add_argument("--m", default="3")
    p.add_argument("--expr", default=None, help="also check that this expression is the zero operator")

    p = sub.add_parser("parse", parents=[common], help="elaborate an operator expression")
    p.add_argument("expr")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--apply", default=None, help="apply to this polynomial expression")

    p = sub.add_parser("project", parents=[common], help="apply an extremal projector")
    p.add_argument("--input", default=None, help="poly-v1 JSON file")
    p.add_argument("--poly", default=None, help="polynomial as an expression, e.g. y_1")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--triple", choices=("ds", "l", "so4"), default="so4")

    p = sub.add_parser("harmonics", parents=[common], help="basis of a harmonic space")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--deg", required=True, help="a,b,c")
    p.add_argument("--kind", choices=HARMONIC_KINDS, default="simplicial")
    p.add_argument("--out", default=None)

    p = sub.add_parser("kernel-check", parents=[common], help="kernel characterization of simplicial harmonics")
    p.add_argument("--m", default="3")
    p.add_argument("--max-deg", default="2,1,1")
    p.add_argument("--projected", action="store_true")

    p = sub.add_parser("fischer", parents=[common], help="Fischer decomposition audit in z")
    p.add_argument("--m", default="3")
    p.add_argument("--max-k", type=int, default=4)

    p = sub.add_parser("branch-k1", parents=[common], help="k=1 branching audit per weight channel")
    p.add_argument("--m", default="3")
    p.add_argument("--lambda", dest="lam", default="-4..1")
    p.add_argument("--word-cap", type=int, default=2)

    p = sub.add_parser("dims", parents=[common], help="simplicial dimensions against the Weyl formula")
    p.add_argument("--m", default="7")
    p.add_argument("--max-deg", default="3,2,1")
    return parser


def make_config(ns: argparse.Namespace) -> RunConfig:
    if ns.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    args: dict = {}
    c = ns.command
    if c == "verify":
        args = {"m": _ms(ns.m), "suite": [s for s in ns.suite.split(",") if s], "expr": ns.expr}
        unknown = [s for s in args["suite"] if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    elif c == "parse":
        args = {"m": ns.m, "expr": ns.expr, "apply": ns.apply}
    elif c == "project":
        args = {"m": ns.m, "input": ns.input, "poly": ns.poly, "triple": ns.triple}
    elif c == "harmonics":
        args = {"m": ns.m, "deg": parse_triple(ns.deg), "kind": ns.kind, "out": ns.out}
    elif c in ("kernel-check", "dims"):
        args = {"m": _ms(ns.m), "max_deg": parse_triple(ns.max_deg),
                "projected": getattr(ns, "projected", False)}
    elif c == "fischer":
        if ns.max_k < 0:
            raise ConfigError("--max-k must be nonnegative")
        args = {"m": _ms(ns.m), "max_k": ns.max_k}
    elif c == "branch-k1":
        args = {"m": _ms(ns.m), "lambda": parse_int_range(ns.lam), "word_cap": ns.word_cap}
    if "m" in args and isinstance(args["m"], int) and args["m"] < 1:
        raise ConfigError("m must be at least 1")
    cache_dir = ns.cache_dir or (str(default_cache_dir()) if default_cache_dir() else None)
    return RunConfig(c, args, ns.format, cache_dir, ns.jobs)


def run(cfg: RunConfig) -> tuple:
    """Execute a config; returns (exit status, rendered report)."""
    rep = COMMANDS[cfg.command](cfg)
    text = render(rep, cfg.fmt)
    status = EXIT_FAIL if rep.failed else EXIT_OK
    return status, text, rep


def _attach_negative_values(argv: Sequence[str]) -> List[str]:
    """Rewrite ``--opt -4..1`` as ``--opt=-4..1`` so argparse does not read a flag."""
    out: List[str] = []
    it = iter(argv)
    for tok in it:
        if tok.startswith("--") and "=" not in tok:
            nxt = next(it, None)
            if nxt is not None and re.match(r"^-\d", nxt):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    ns = parser.parse_args(_attach_negative_values(sys.argv[1:] if argv is None else argv))
    try:
        cfg = make_config(ns)
        status, text, rep = run(cfg)
    except (ConfigError, DSLError, DimensionError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"mzbranch {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    out = ns.output or (cfg.args.get("out") if cfg.command == "harmonics" else None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
