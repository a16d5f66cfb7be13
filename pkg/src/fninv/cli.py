"""Command-line experiment runner.

    fninv verify-claims --claim known-unit-vectors --p 3 --seed 7
    fninv protocol --n 17 --family q1 --runs 10000 --t 3 --seed 3
    fninv protocol --audit transcripts.jsonl
    fninv bounds --kind tree-theorem --n 1048576 --d 4 --q 16 --m 100 --sweep s=0:4000:500 --seed 0 --format csv
    fninv invert-bench --inverter hellman --n 1009 --m-tables 1 2 4 --t-chain 4 8 --seed 5

Every randomized run needs ``--seed``. Exit status: 0 when no check FAILs,
1 on a FAIL verdict or failed audit, 2 on configuration errors. CSV floats
are written with 17 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict

import numpy as np

from . import __version__
from . import bounds as BD
from . import claims as C
from . import reduction as R
from .errors import ConfigError, DomainError, FnInvError, ParameterError
from .field import make_field, sample_function
from .inverters import AdaptiveInverter, success_probability, uniform_challenge_success, zero_advice_affine_inverter
from .linalg import Mat
from .registry import inverter_from_descriptor, load_descriptor
from .rng import Rng

CLAIMS = (
    "known-unit-vectors",
    "good-indices",
    "conditioned",
    "tau-delta",
    "correct-preimage",
    "chain",
    "advanced-span",
    "entropy",
)
BOUND_KINDS = ("affine-lemma", "tree-lemma", "affine-theorem", "tree-theorem", "tree-threshold", "factor-compare")
INT_PARAMS = ("n", "s", "q", "d", "m", "i", "t", "ell", "c")
FLOAT_PARAMS = ("tau", "delta", "mu", "gamma")


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, (dict, list)):
        return json.dumps(x, sort_keys=True)
    if x is None:
        return ""
    return str(x)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (required for randomized runs)")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="fninv", description="Function-inversion experiments.")
    parser.add_argument("--version", action="version", version=f"fninv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-claims", parents=[common], help="run claim verifiers")
    v.add_argument("--claim", choices=CLAIMS + ("all",), default="all")
    v.add_argument("--p", type=int, nargs="+", default=[2, 3, 5], help="field sizes for the exhaustive span check")
    v.add_argument("--max-rows", type=int, default=2)
    v.add_argument("--max-cols", type=int, default=3)
    v.add_argument("--n", type=int, default=17)
    v.add_argument("--c", type=int, default=1)
    v.add_argument("--mu", type=float, default=0.25)
    v.add_argument("--gamma", type=float, default=0.25)
    v.add_argument("--tau", type=float, default=0.25)
    v.add_argument("--delta", type=float, default=0.25)
    v.add_argument("--i", type=int, default=1)
    v.add_argument("--ell", type=int, default=2)

    p = sub.add_parser("protocol", parents=[common], help="run the disjointness protocol")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--family", choices=("q0", "q1"), default="q0")
    p.add_argument("--inverter", default="full-table", help="kind name, inline JSON or .json descriptor")
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--t", type=int, default=1, help="repetitions per run")
    p.add_argument("--transcripts", default=None, help="write JSONL transcripts here")
    p.add_argument("--audit", default=None, help="re-verify a JSONL transcript file and exit")

    b = sub.add_parser("bounds", parents=[common], help="evaluate bound formulas over a grid")
    b.add_argument("--kind", choices=BOUND_KINDS, required=True)
    for name in INT_PARAMS:
        b.add_argument(f"--{name}", type=int, default=None)
    for name in FLOAT_PARAMS:
        b.add_argument(f"--{name}", type=float, default=None)
    b.add_argument("--sweep", action="append", default=[], help="NAME=START:STOP:STEP (stop exclusive)")

    ib = sub.add_parser("invert-bench", parents=[common], help="measure inverter success rates")
    ib.add_argument("--inverter", default="full-table")
    ib.add_argument("--n", type=int, default=None)
    ib.add_argument("--m-tables", type=int, nargs="+", default=[10])
    ib.add_argument("--t-chain", type=int, nargs="+", default=[10])
    ib.add_argument("--functions", type=int, default=1, help="average over this many random functions")
    ib.add_argument(
        "--challenges",
        choices=("image", "uniform"),
        default="image",
        help="image: y = f(x) for uniform x; uniform: y uniform in [n]",
    )
    return parser


def _require_seed(args) -> int:
    if args.seed is None:
        raise ConfigError("--seed is required; runs never fall back to an implicit seed")
    return args.seed


# ---------------------------------------------------------- verify-claims


def _advanced_span_inputs(n: int, ell: int, rng: Rng):
    F = make_field(n)
    A = Mat(rng.split(0).integers(n, (ell, n)), F, cols=n)
    w = rng.split(1).integers(n, n)
    v = (A.entries @ w) % n if ell else np.zeros(0, dtype=np.int64)
    rows = rng.split(2).integers(n, (n, n))
    blocks = [Mat(rows[y : y + 1], F, cols=n) for y in range(n)]
    return A, v, blocks


def cmd_verify_claims(args) -> tuple[list[dict], bool]:
    seed = _require_seed(args)
    trials = args.trials or 100_000
    n = args.n
    selected = CLAIMS if args.claim == "all" else (args.claim,)
    rng = Rng(seed)
    out = []
    for k, name in enumerate(CLAIMS):
        if name not in selected:
            continue
        sub = rng.split(k)
        if name == "known-unit-vectors":
            rep = C.verify_known_unit_vectors(args.p, args.max_rows, args.max_cols)
        elif name == "good-indices":
            sets = C.shifted_singletons(n) if args.c == 1 else [tuple(range(1, args.c + 1))] * n
            rep = C.verify_not_many_good_indices(n, sets, args.mu, trials, sub)
        elif name == "conditioned":
            sets = C.shifted_singletons(n) if args.c == 1 else [tuple(range(1, args.c + 1))] * n
            rep = C.verify_conditioned_claim(n, sets, args.gamma, C.fixed_value_event(n), trials, sub)
        elif name == "tau-delta":
            rep = C.verify_tau_delta(n, args.tau, args.delta, trials, sub)
        elif name == "correct-preimage":
            rep = C.verify_correct_preimage(inverter_from_descriptor({"kind": "full-table", "n": 3}), 3)
        elif name == "chain":
            inv = zero_advice_affine_inverter(list(range(1, n + 1)))
            if inv.affine is None:
                raise ConfigError("the chain verifier needs prime --n")
            rep = C.estimate_chain_success(inv, n, args.i, trials, sub, args.mu)
        elif name == "advanced-span":
            A, v, blocks = _advanced_span_inputs(n, args.ell, sub.split(0))
            rep = C.verify_advanced_span_claim(A, v, blocks, args.mu, trials, sub.split(1))
        else:
            rep = C.verify_entropy_facts()
        out.append(rep.to_json())
    return out, any(r["verdict"] == BD.FAIL for r in out)


# ---------------------------------------------------------------- protocol


def cmd_protocol(args) -> tuple[list[dict], bool]:
    if args.audit:
        try:
            with open(args.audit) as fh:
                res = R.audit_jsonl(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read {args.audit}: {exc}") from exc
        row = {"audit": args.audit, "ok": res.ok, "transcripts": res.transcripts, "total_bits": res.total_bits, "problems": res.problems}
        return [row], not res.ok
    seed = _require_seed(args)
    desc = load_descriptor(args.inverter)
    desc.setdefault("n", args.n)
    inv = inverter_from_descriptor(desc)
    if not isinstance(inv, AdaptiveInverter):
        raise ConfigError("the protocol needs an adaptive inverter")
    if inv.n != args.n:
        raise ConfigError(f"inverter is over n={inv.n}, --n is {args.n}")
    family = R.disjoint_pair if args.family == "q0" else R.intersecting_pair
    rng = Rng(seed)
    accepts = errors = max_bits = 0
    audit_ok = True
    sink = open(args.transcripts, "w") if args.transcripts else None
    try:
        for k in range(args.runs):
            inp = family(args.n, rng.split(2 * k))
            tr = R.run_repeated(args.t, inv, inp, rng.split(2 * k + 1))
            accepts += tr.accepted
            errors += tr.accepted != R.brute_disjoint(inp)
            max_bits = max(max_bits, tr.total_bits)
            audit_ok = audit_ok and not tr.audit()
            if sink:
                sink.write(R.transcript_to_jsonl(tr))
    finally:
        if sink:
            sink.close()
    runs = args.runs
    row = {
        "n": args.n,
        "family": args.family,
        "inverter": desc.get("kind"),
        "t": args.t,
        "runs": runs,
        "accepts": accepts,
        "accept_rate": accepts / runs if runs else math.nan,
        "reject_rate": (runs - accepts) / runs if runs else math.nan,
        "errors_vs_truth": errors,
        "max_bits": max_bits,
        "bound": args.t * R.cc_bound(inv.s, inv.q, args.n),
        "audit_ok": audit_ok,
    }
    failed = not audit_ok or (args.family == "q0" and accepts != runs)
    return [row], failed


# ------------------------------------------------------------------ bounds


def _parse_sweep(text: str) -> tuple[str, list]:
    try:
        name, rng_text = text.split("=", 1)
        start, stop, step = rng_text.split(":")
    except ValueError as exc:
        raise ConfigError(f"bad sweep {text!r}; expected NAME=START:STOP:STEP") from exc
    if name in INT_PARAMS:
        return name, list(range(int(start), int(stop), int(step)))
    if name in FLOAT_PARAMS:
        a, b_, h = float(start), float(stop), float(step)
        if h <= 0:
            raise ConfigError("sweep step must be positive")
        count = max(0, math.ceil((b_ - a) / h - 1e-9))
        return name, [a + k * h for k in range(count)]
    raise ConfigError(f"unknown sweep parameter {name!r}")


def _grid(args):
    base = {k: getattr(args, k) for k in INT_PARAMS + FLOAT_PARAMS if getattr(args, k) is not None}
    axes = [_parse_sweep(s) for s in args.sweep]
    cells = [base]
    for name, values in axes:
        cells = [{**c, name: v} for c in cells for v in values]
    return cells


def _bound_row(kind: str, cell: dict) -> dict:
    if "n" not in cell:
        raise ConfigError("--n is required")
    n = cell["n"]
    if kind == "affine-lemma":
        val = BD.eval_affine_lemma_bound(n, cell.get("i", 1), cell.get("mu", 0.25))
    elif kind == "tree-lemma":
        val = BD.eval_tree_lemma_bound(n, cell.get("i", 1), cell.get("d", 1), cell.get("q", 1), cell.get("mu", 0.25))
    elif kind in ("affine-theorem", "tree-theorem"):
        pr = BD.BoundParams(**{k: v for k, v in cell.items() if k in BD.BoundParams.__dataclass_fields__})
        val = BD.eval_affine_theorem_bound(pr) if kind == "affine-theorem" else BD.eval_tree_theorem_bound(pr)
    else:
        raise ConfigError(f"{kind} is not a per-cell bound")
    return {**cell, "bound": val, "vacuous": BD.is_vacuous(val)}


def cmd_bounds(args) -> tuple[list[dict], bool]:
    _require_seed(args)
    if args.kind == "tree-threshold":
        if args.n is None:
            raise ConfigError("--n is required")
        d, q, tau = args.d or 1, args.q or 1, args.tau if args.tau is not None else 0.5
        th = BD.tree_s_threshold(args.n, d, q, tau)
        shape = args.n / (d * math.log2(args.n)) * tau * tau
        return [{"n": args.n, "d": d, "q": q, "tau": tau, **asdict(th), "shape_n_tau2_over_d_logn": shape}], False
    if args.kind == "factor-compare":
        if args.n is None:
            raise ConfigError("--n is required")
        n, d, q = args.n, args.d if args.d is not None else 1, args.q or 1
        m = args.m if args.m is not None else n // 16
        rows = [{"j": j, "affine_factor": BD.affine_factor(n, j), "tree_factor": BD.tree_factor(n, j, d, q)} for j in range(1, m + 1)]
        return rows, False
    return [_bound_row(args.kind, cell) for cell in _grid(args)], False


# ------------------------------------------------------------ invert-bench


def cmd_invert_bench(args) -> tuple[list[dict], bool]:
    seed = _require_seed(args)
    trials = args.trials or 10_000
    desc = load_descriptor(args.inverter)
    if args.n is not None:
        desc["n"] = args.n
    if "n" not in desc:
        raise ConfigError("--n is required")
    n = int(desc["n"])
    if args.functions < 1:
        raise ConfigError("--functions must be >= 1")
    rng = Rng(seed)
    fs = [sample_function(n, rng.split(0).split(k)) for k in range(args.functions)]
    per = max(1, trials // args.functions)
    rows = []
    if desc.get("kind") == "hellman":
        cells = [(m, t) for m in args.m_tables for t in args.t_chain]
    else:
        cells = [(None, None)]
    for m, t in cells:
        cell_desc = dict(desc)
        if m is not None:
            cell_desc.update({"m_tables": m, "t_chain": t, "seed": cell_desc.get("seed", seed)})
        inv = inverter_from_descriptor(cell_desc)
        if args.challenges == "image":
            rates = [success_probability(inv, f, "mc", per, rng.split(1).split(k)) for k, f in enumerate(fs)]
        else:
            rates = [uniform_challenge_success(inv, f, per, rng.split(1).split(k)) for k, f in enumerate(fs)]
        rate = sum(rates) / len(rates)
        rows.append(
            {
                "kind": desc.get("kind"),
                "challenges": args.challenges,
                "n": n,
                "m_tables": m,
                "t_chain": t,
                "s": inv.s,
                "q": inv.q,
                "functions": len(fs),
                "trials": per * len(fs),
                "success": rate,
                "baseline_q_over_n": inv.q / n,
            }
        )
    return rows, False


# -------------------------------------------------------------------- main

HANDLERS = {
    "verify-claims": cmd_verify_claims,
    "protocol": cmd_protocol,
    "bounds": cmd_bounds,
    "invert-bench": cmd_invert_bench,
}
CSV_COLUMNS = {
    "verify-claims": ["claim_id", "verdict", "estimate", "half_width", "bound", "trials", "successes", "checked", "value", "params"],
    "protocol": ["n", "family", "inverter", "t", "runs", "accepts", "accept_rate", "reject_rate", "errors_vs_truth", "max_bits", "bound", "audit_ok"],
    "bounds": None,
    "invert-bench": ["kind", "challenges", "n", "m_tables", "t_chain", "s", "q", "functions", "trials", "success", "baseline_q_over_n"],
}


def _csv_columns(args, rows) -> list[str]:
    if args.command == "protocol" and args.audit:
        return ["audit", "ok", "transcripts", "total_bits", "problems"]
    cols = CSV_COLUMNS[args.command]
    if cols is not None:
        return cols
    if args.kind == "tree-threshold":
        return ["n", "d", "q", "tau", "s_star", "delta", "m", "bound_at", "bound_next", "shape_n_tau2_over_d_logn"]
    if args.kind == "factor-compare":
        return ["j", "affine_factor", "tree_factor"]
    names = [k for k in INT_PARAMS + FLOAT_PARAMS if getattr(args, k) is not None]
    names += [s.split("=", 1)[0] for s in args.sweep if s.split("=", 1)[0] not in names]
    return names + ["bound", "vacuous"]


def render(args, rows, wall: float) -> str:
    if args.format == "csv":
        buf = io.StringIO()
        cols = _csv_columns(args, rows)
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([fmt(r.get(c)) for c in cols])
        return buf.getvalue()
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "format")}
    record = {"tool": "fninv", "version": __version__, "config": config, "results": rows, "wall_time_s": wall}
    return json.dumps(record, sort_keys=True, indent=1, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        rows, failed = HANDLERS[args.command](args)
    except (ConfigError, ParameterError, DomainError) as exc:
        print(f"fninv: error: {exc}", file=sys.stderr)
        return 2
    except FnInvError as exc:
        print(f"fninv: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = render(args, rows, time.perf_counter() - start)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
