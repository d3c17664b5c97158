"""Command-line interface: ``qmonogamy {eval,bound,roof,audit,state,scan}``.

Exit codes: 0 success, 2 invalid input, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

from . import bounds, measures, monogamy, qstate, search, states
from .errors import NumericError, StateError, ValidationError

SEED_ENV = "QMONOGAMY_SEED"
DEFAULT_SEED = 0
DIGITS = 12
LETTERS = "ABCDE"


class UsageError(ValidationError):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _round(obj):
    if isinstance(obj, float):
        return float(f"{obj:.{DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.{DIGITS}g}"
    return str(x)


def parse_indices(text: str, n: int) -> list[int]:
    out = []
    for ch in text.strip():
        if ch.upper() in LETTERS:
            i = LETTERS.index(ch.upper())
        elif ch.isdigit():
            i = int(ch)
        else:
            raise UsageError(f"bad subsystem label {ch!r} in {text!r}")
        if i >= n:
            raise UsageError(f"subsystem {ch!r} does not exist in a {n}-party state")
        if i in out:
            raise UsageError(f"subsystem {ch!r} repeated in {text!r}")
        out.append(i)
    if not out:
        raise UsageError("empty subsystem selector")
    return out


def parse_split(text: str, n: int) -> tuple[list[int], list[int]]:
    """``A:BC`` or ``0:12`` -> ``([0], [1, 2])``; parties not named get traced out."""
    if text.count(":") != 1:
        raise UsageError(f"split must look like A:BC, got {text!r}")
    a, b = text.split(":")
    left, right = parse_indices(a, n), parse_indices(b, n)
    if set(left) & set(right):
        raise UsageError(f"split {text!r} names a subsystem on both sides")
    return left, right


def parse_dims(text: str) -> list[int]:
    try:
        dims = [int(x) for x in text.replace("x", ",").split(",") if x]
    except ValueError:
        raise UsageError(f"--dims must be comma separated integers, got {text!r}") from None
    if not dims:
        raise UsageError("--dims is empty")
    return dims


# --- input resolution -----------------------------------------------------------

def load_input(args) -> qstate.PureState | qstate.DensityMatrix:
    if (args.state is None) == (args.file is None):
        raise UsageError("give exactly one of --state or --file")
    if args.file is not None:
        try:
            return qstate.load_state(args.file)
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    dims = parse_dims(args.dims) if args.dims else None
    return states.build(args.state, d=args.d, dims=dims, rank=args.rank, seed=args.seed)


def resolve_cut(state, split_text: str) -> tuple[qstate.PureState | qstate.DensityMatrix, qstate.BipartiteSplit, list[int]]:
    """Trace out parties the split does not mention and renumber the rest."""
    n = len(state.dims)
    left, right = parse_split(split_text, n)
    named = sorted(left + right)
    traced = [i for i in range(n) if i not in named]
    if traced:
        rho = state if isinstance(state, qstate.DensityMatrix) else None
        state = (qstate.partial_trace(rho, named) if rho is not None
                 else qstate.reduced_density(state, named))
        remap = {old: new for new, old in enumerate(named)}
        left, right = [remap[i] for i in left], [remap[i] for i in right]
    return state, qstate.BipartiteSplit(tuple(left), tuple(right)), traced


def as_density(state) -> qstate.DensityMatrix:
    return state if isinstance(state, qstate.DensityMatrix) else qstate.density_from_pure(state)


def roof_config(args) -> bounds.RoofConfig:
    return bounds.RoofConfig(
        seed=args.seed, ensemble_size=args.ensemble_size,
        restarts=args.restarts if args.restarts is not None else 8,
        max_iters=args.max_iters if args.max_iters is not None else 2000,
    )


def _cut_doc(command: str, state, split: qstate.BipartiteSplit, traced: list[int], result) -> dict:
    m, n = split.block_dims(state.dims)
    return {
        "command": command,
        "dims": list(state.dims),
        "split": {"left": list(split.left), "right": list(split.right)},
        "traced": traced,
        "block_dims": [m, n],
        "result": result.to_dict(),
    }


# --- subcommands ------------------------------------------------------------------

def cmd_eval(args) -> dict:
    state, split, traced = resolve_cut(load_input(args), args.split)
    if isinstance(state, qstate.PureState):
        result = measures.pure_concurrence_sq(state, split)
    elif state.dims == (2, 2):
        result = measures.wootters_concurrence(qstate.permute_subsystems(state, list(split.left + split.right)))
    else:
        result = bounds.antisym_exact_sq(state, split)
        if result is None:
            raise UsageError("no exact formula applies to this mixed state; use 'bound' or 'roof'")
    return _cut_doc("eval", state, split, traced, result)


def cmd_bound(args) -> dict:
    state, split, traced = resolve_cut(load_input(args), args.split)
    rho = as_density(state)
    m, n = split.block_dims(rho.dims)
    method = args.method
    if method == "auto":
        method = "2xM" if 2 in (m, n) else "svd"
    if method == "2xM":
        result = bounds.lower_bound_2xM_sq(rho, split)
    else:
        restarts = args.restarts if args.restarts is not None else 8
        iters = args.max_iters if args.max_iters is not None else bounds.LB_MAX_ITERS
        result = bounds.lower_bound_sq(rho, split, restarts=restarts, seed=args.seed, max_iters=iters)
    return _cut_doc("bound", rho, split, traced, result)


def cmd_roof(args) -> dict:
    state, split, traced = resolve_cut(load_input(args), args.split)
    rho = as_density(state)
    result = bounds.convex_roof_sq(rho, split, roof_config(args))
    return _cut_doc("roof", rho, split, traced, result)


def cmd_audit(args) -> dict:
    psi = load_input(args)
    if not isinstance(psi, qstate.PureState):
        raise UsageError("audit needs a pure three-party state")
    cfg = roof_config(args)
    if args.all_foci:
        reports = monogamy.audit_all_foci(psi, cfg, args.tolerance)
    else:
        focus = parse_indices(args.focus or "A", len(psi.dims))
        if len(focus) != 1:
            raise UsageError("--focus names a single party")
        reports = [monogamy.audit(psi, focus[0], cfg, args.tolerance)]
    return {
        "command": "audit",
        "dims": list(psi.dims),
        "roof_config": cfg.to_dict(),
        "reports": [r.to_dict() for r in reports],
    }


def cmd_state(args):
    name = args.name or args.state
    if name is None:
        raise UsageError("state needs --name")
    dims = parse_dims(args.dims) if args.dims else None
    st = states.build(name, d=args.d, dims=dims, rank=args.rank, seed=args.seed)
    if args.keep:
        keep = parse_indices(args.keep, len(st.dims))
        st = qstate.partial_trace(as_density(st), keep)
    return qstate.state_to_dict(st)


def cmd_scan(args):
    dims = parse_dims(args.dims) if args.dims else [2, 2, 2]
    inject = tuple(states.build(name) for name in (args.inject or []))
    roof = search.scan_roof_config(args.seed)
    if args.restarts is not None or args.max_iters is not None:
        roof = bounds.RoofConfig(seed=args.seed, ensemble_size=args.ensemble_size,
                                 restarts=args.restarts or search.SCAN_RESTARTS,
                                 max_iters=args.max_iters or search.SCAN_MAX_ITERS)
    cfg = search.ScanConfig(tuple(dims), args.samples, args.seed, args.threshold, roof, inject)
    records = search.scan(cfg, workers=args.workers)
    return cfg, records


# --- rendering --------------------------------------------------------------------

def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def render_cut(doc: dict, fmt: str) -> str:
    r = doc["result"]
    if fmt == "json":
        return json.dumps(_round(doc), indent=2) + "\n"
    rows = [("command", "block_dims", "value_sq", "certainty"),
            (doc["command"], "x".join(map(str, doc["block_dims"])), r["value_sq"], r["certainty"])]
    if fmt == "csv":
        return _csv(rows)
    lines = [f"{doc['command']}: split {doc['split']['left']} | {doc['split']['right']}"
             + (f" (traced {doc['traced']})" if doc["traced"] else ""),
             f"  C^2        {_fmt(r['value_sq'])}",
             f"  certainty  {r['certainty']}"]
    for k, v in r["meta"].items():
        lines.append(f"  {k:<10} {_fmt(v)}")
    return "\n".join(lines) + "\n"


def render_audit(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_round(doc), indent=2) + "\n"
    header = ("focus", "C2_fb", "cert_b", "C2_fc", "cert_c", "C2_f(rest)", "tangle", "verdict")
    rows = [header]
    for r in doc["reports"]:
        rows.append((r["focus_label"], r["c2_focus_b"]["value_sq"], r["c2_focus_b"]["certainty"],
                     r["c2_focus_c"]["value_sq"], r["c2_focus_c"]["certainty"],
                     r["c2_focus_rest"]["value_sq"], r["tangle"], r["verdict"]))
    if fmt == "csv":
        return _csv(rows)
    cells = [[_fmt(x) for x in row] for row in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in cells)


def render_state(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc) + "\n"
    if doc["kind"] == "pure":
        rows = [("index", "labels", "re", "im")]
        for i, (re, im) in enumerate(doc["amplitudes"]):
            if re or im:
                rows.append((i, "".join(map(str, qstate.basis_labels(doc["dims"], i))), re, im))
    else:
        rows = [("row", "col", "re", "im")]
        for i, row in enumerate(doc["matrix"]):
            for j, (re, im) in enumerate(row):
                if re or im:
                    rows.append((i, j, re, im))
    if fmt == "csv":
        return _csv(rows)
    return f"{doc['kind']} state, dims {doc['dims']}\n" + "".join(
        "  ".join(_fmt(x) for x in row) + "\n" for row in rows)


def render_scan(cfg, records, fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(_round(r.to_dict())) + "\n" for r in records)
    if fmt == "csv":
        return search.summary_csv(cfg, records)
    lines = [f"scan dims {'x'.join(map(str, cfg.dims))}, {len(records)} samples, "
             f"{sum(r.candidate for r in records)} candidates"]
    for r in records[:10]:
        lines.append(f"  #{r.seed_offset:<5} best_margin {_fmt(r.best_margin):<20} "
                     f"{'CANDIDATE' if r.candidate else ''}".rstrip())
    return "\n".join(lines) + "\n"


# --- parser -----------------------------------------------------------------------

def _input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", help=f"catalog state: {', '.join(states.CATALOG)}")
    p.add_argument("--file", help="state JSON file")
    p.add_argument("--d", type=int, default=3, help="local dimension for ghz")
    p.add_argument("--dims", help="comma separated dims for random states")
    p.add_argument("--rank", type=int, default=1, help="rank for random_mixed")


def _opt_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--ensemble-size", type=int)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmonogamy", description="Qudit concurrences and monogamy audits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="exact squared concurrence across a cut")
    _input_args(p)
    p.add_argument("--split", required=True, help="cut such as A:BC or 0:12")
    _common(p)

    p = sub.add_parser("bound", help="lower bound on the squared concurrence")
    _input_args(p)
    p.add_argument("--split", required=True)
    p.add_argument("--method", choices=("auto", "svd", "2xM"), default="auto")
    _opt_args(p)
    _common(p)

    p = sub.add_parser("roof", help="convex-roof upper estimate")
    _input_args(p)
    p.add_argument("--split", required=True)
    _opt_args(p)
    _common(p)

    p = sub.add_parser("audit", help="monogamy audit of a three-party pure state")
    _input_args(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--focus", help="focus party, e.g. A")
    g.add_argument("--all-foci", action="store_true")
    p.add_argument("--tolerance", type=float, default=monogamy.DEFAULT_TOLERANCE)
    _opt_args(p)
    _common(p)

    p = sub.add_parser("state", help="emit a catalog state as JSON")
    p.add_argument("--name", help=f"one of {', '.join(states.CATALOG)}")
    p.add_argument("--state", help="alias of --name")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--dims")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--keep", help="emit the reduced state on these parties, e.g. AB")
    _common(p)

    p = sub.add_parser("scan", help="random search for monogamy violations")
    p.add_argument("--dims", help="M,N,Q (default 2,2,2)")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--threshold", type=float, default=1e-6, help="best_margin above which a sample is a candidate")
    p.add_argument("--inject", action="append", help="catalog state used for the leading samples")
    p.add_argument("--workers", type=int, default=1)
    _opt_args(p)
    _common(p)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = default_seed()
        if args.command == "state":
            text = render_state(cmd_state(args), args.format)
        elif args.command == "scan":
            cfg, records = cmd_scan(args)
            text = render_scan(cfg, records, args.format)
        elif args.command == "audit":
            text = render_audit(cmd_audit(args), args.format)
        else:
            handler = {"eval": cmd_eval, "bound": cmd_bound, "roof": cmd_roof}[args.command]
            text = render_cut(handler(args), args.format)
    except (ValidationError, StateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())
