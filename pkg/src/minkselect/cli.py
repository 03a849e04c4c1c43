"""Command-line interface: problem ingestion, engine dispatch, result
emission, and the benchmark harness for the doubling experiments.

Problem files are JSON:

    {"P": [[x, y], ...], "Q": [[x, y], ...],
     "constraints": [{"a": .., "b": .., "c": .., "op": ">="}, ...],
     "objective": {"type": "linear", "coeffs": [d, e]},
     "query": {"kind": "select", "value": k}}

Sequence files are one record per line: a bare number, or "value,width"
for weighted sequences.  Output is single-line JSON.  Exit codes: 0 ok,
2 infeasible, 3 rank out of range, 4 parse/schema error, 5 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from fractions import Fraction

import numpy as np

from .applications import density_find, lcss_select, sum_select
from .errors import (
    InfeasibleError,
    InputError,
    InternalInvariantError,
    MinkError,
    NoFeasibleValueError,
    RankRangeError,
)
from .finding import find_linear, find_ratio
from .geometry import HalfPlaneConstraint, Objective, normalize_constraint
from .oracle import oracle_enumerate, oracle_find, oracle_rank, oracle_select
from .randomized import ContractionSelector
from .selection import (
    OneConstraintEngine,
    ParallelStripEngine,
    PolygonSlabEngine,
    TwoConstraintEngine,
    make_pair_engine,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_RANK = 3
EXIT_PARSE = 4
EXIT_INTERNAL = 5


def _load_spec(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
        spec = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot parse problem file: {exc}")
    if not isinstance(spec, dict):
        raise InputError("problem file must hold a JSON object")
    for key in ("P", "Q"):
        if key not in spec or not isinstance(spec[key], list):
            raise InputError(f"missing point list {key!r}")
    return spec


def _parse_constraints(spec) -> list:
    out = []
    for i, c in enumerate(spec.get("constraints", [])):
        try:
            out.append(normalize_constraint(c["a"], c["b"], c["c"], c.get("op", ">=")))
        except (KeyError, TypeError) as exc:
            raise InputError(f"constraint #{i + 1} malformed: {exc}")
    return out


def _parse_objective(spec) -> Objective:
    obj = spec.get("objective", {"type": "linear", "coeffs": [0, 1]})
    try:
        kind = obj["type"]
        a, b = obj["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"objective malformed: {exc}")
    if kind == "linear":
        return Objective.linear(a, b)
    if kind == "ratio":
        return Objective.ratio(a, b)
    raise InputError(f"unknown objective type {kind!r}")


def _num(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


def _is_parallel(L1, L2, eps: float) -> bool:
    cross = L1.a * L2.b - L1.b * L2.a
    if eps == 0:
        return cross == 0
    return abs(cross) <= eps * math.hypot(L1.a, L1.b) * math.hypot(L2.a, L2.b)


def run(spec: dict, engine: str = "auto", seed: int = 0, eps: float = 0.0, mode=None) -> dict:
    """Dispatch one problem to the right engine and return the result record."""
    P, Q = spec["P"], spec["Q"]
    cons = _parse_constraints(spec)
    f = _parse_objective(spec)
    query = spec.get("query")
    if not isinstance(query, dict) or "kind" not in query or "value" not in query:
        raise InputError("query must carry 'kind' and 'value'")
    kind, value = query["kind"], query["value"]
    mode = mode or spec.get("mode")
    lam = len(cons)
    t0 = time.perf_counter()

    if engine == "oracle":
        enum = oracle_enumerate(P, Q, cons, eps=eps, mode=mode)
        if kind == "select":
            answer, witness, dist = oracle_select(enum, f, int(value)), None, None
        elif kind == "rank":
            answer, witness, dist = oracle_rank(enum, f, value), None, None
        elif kind == "find":
            dist, answer, p, q = oracle_find(enum, f, value)
            witness = (p, q)
        else:
            raise InputError(f"unknown query kind {kind!r}")
        used = "oracle"
    elif kind == "find":
        if f.kind == "linear":
            res = find_linear(P, Q, cons, f, value, eps=eps, mode=mode)
        else:
            res = find_ratio(P, Q, cons, f.p, f.q, value, eps=eps, mode=mode)
        answer, dist, witness = res.value, res.distance, res.witness
        used = "finding"
    elif kind in ("select", "rank"):
        if f.kind != "linear":
            raise InputError("selection and ranking need a linear objective")
        dist = None
        rng = np.random.default_rng(seed)
        two_general = lam == 2 and not _is_parallel(cons[0], cons[1], eps)
        if engine == "randomized" and not (two_general and kind == "select"):
            raise InputError("randomized engine applies to select with two general constraints")
        if lam == 0:
            eng = OneConstraintEngine(P, Q, None, f, eps=eps, mode=mode)
            used = "unconstrained"
        elif lam == 1:
            eng = OneConstraintEngine(P, Q, cons[0], f, eps=eps, mode=mode)
            used = "selection1"
        elif lam == 2 and not two_general:
            eng = ParallelStripEngine(P, Q, cons[0], cons[1], f, eps=eps, mode=mode)
            used = "parallel"
        elif two_general:
            if engine == "randomized":
                eng = ContractionSelector(P, Q, cons[0], cons[1], f, eps=eps, mode=mode)
                used = "selection2-randomized"
            else:
                eng = TwoConstraintEngine(P, Q, cons[0], cons[1], f, eps=eps, mode=mode)
                used = "selection2"
        else:
            eng = PolygonSlabEngine(P, Q, cons, f, eps=eps, mode=mode)
            used = "selection-lambda"
        if kind == "select":
            if isinstance(eng, ContractionSelector):
                res = eng.select(int(value), seed=seed)
            else:
                res = eng.select(int(value), rng=rng)
            answer, witness = res.value, res.witness
        else:
            r = eng.rank(value)
            answer = r.rank if hasattr(r, "rank") else r
            witness = None
    else:
        raise InputError(f"unknown query kind {kind!r}")

    elapsed = (time.perf_counter() - t0) * 1e3
    out = {"answer": _num(answer)}
    if dist is not None:
        out["distance"] = _num(dist)
    if witness is not None:
        out["witness"] = {"p": int(witness[0]), "q": int(witness[1])}
    out["engine"] = used
    out["elapsed_ms"] = round(elapsed, 3)
    return out


def ingest_sequence(path: str, fmt: str = "plain"):
    """Parse a sequence file: one value per line, or "value,width"."""

    def parse_num(tok, lineno):
        tok = tok.strip()
        try:
            return int(tok)
        except ValueError:
            try:
                return float(tok)
            except ValueError:
                raise InputError(f"line {lineno}: not a number: {tok!r}")

    values, pairs = [], []
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        toks = line.split(",")
        if fmt == "plain":
            if len(toks) != 1:
                raise InputError(f"line {lineno}: expected one value")
            values.append(parse_num(toks[0], lineno))
        else:
            if len(toks) != 2:
                raise InputError(f"line {lineno}: expected value,width")
            s = parse_num(toks[0], lineno)
            w = parse_num(toks[1], lineno)
            if not w > 0:
                raise InputError(f"line {lineno}: width must be positive")
            pairs.append((s, w))
    if fmt == "plain":
        if not values:
            raise InputError("empty sequence file")
        return values
    if not pairs:
        raise InputError("empty sequence file")
    return pairs


# ---------------------------------------------------------------------------
# benchmark harness


def _bench_instance(n: int, seed: int, lam: int):
    rng = np.random.default_rng((seed + 1) * 1_000_003 + n)
    P = rng.integers(-(1 << 20), 1 << 20, size=(n, 2))
    Q = rng.integers(-(1 << 20), 1 << 20, size=(n, 2))
    cons = []
    if lam >= 1:
        cons.append(HalfPlaneConstraint(1, 1, -(1 << 19)))
    if lam >= 2:
        cons.append(HalfPlaneConstraint(-1, 2, -(1 << 21)))
    return P, Q, cons


def bench(sizes, engines, seeds, out_path=None, plot_path=None, lcss_n: int = 1 << 16):
    """Deterministic doubling benchmark; returns the row dicts."""
    rows = []
    for engine in engines:
        for seed in seeds:
            prev = {}
            for n in sizes:
                rng = np.random.default_rng(seed)
                repeats = 0
                if engine == "selection1":
                    P, Q, cons = _bench_instance(n, seed, 1)
                    t0 = time.perf_counter()
                    eng = OneConstraintEngine(P, Q, cons[0], Objective.linear(0, 1))
                    k = max(1, eng.total_feasible // 3)
                    ans = eng.select(k, rng=rng, want_witness=False).value
                    dt = time.perf_counter() - t0
                    lam = 1
                elif engine == "selection2":
                    P, Q, cons = _bench_instance(n, seed, 2)
                    t0 = time.perf_counter()
                    eng = TwoConstraintEngine(P, Q, cons[0], cons[1], Objective.linear(0, 1))
                    k = max(1, eng.total_feasible // 3)
                    ans = eng.select(k, rng=rng, want_witness=False).value
                    dt = time.perf_counter() - t0
                    lam = 2
                elif engine == "selection2rand":
                    P, Q, cons = _bench_instance(n, seed, 2)
                    t0 = time.perf_counter()
                    sel = ContractionSelector(P, Q, cons[0], cons[1], Objective.linear(0, 1))
                    k = max(1, sel.eng.total_feasible // 3)
                    ans = sel.select(k, seed=seed, want_witness=False).value
                    repeats = sel.repeats
                    dt = time.perf_counter() - t0
                    lam = 2
                elif engine == "lcss":
                    gen = np.random.default_rng((seed + 1) * 7_000_003 + n)
                    S = gen.integers(-1000, 1001, size=lcss_n).tolist()
                    u = min(64 + n, lcss_n)  # here n plays the window-width role
                    t0 = time.perf_counter()
                    res = lcss_select(S, 1, u, max(1, lcss_n // 2))
                    ans = res.statistic
                    dt = time.perf_counter() - t0
                    lam = 2
                else:
                    raise InputError(f"unknown bench engine {engine!r}")
                row = {
                    "engine": engine,
                    "n": n,
                    "lambda": lam,
                    "query": "select",
                    "seed": seed,
                    "wall_ms": round(dt * 1e3, 3),
                    "repeats": repeats,
                    "answer": _num(ans),
                }
                row["doubling_ratio"] = (
                    round(dt / prev[engine], 4) if engine in prev and prev[engine] > 0 else ""
                )
                prev[engine] = dt
                rows.append(row)
    fields = ["engine", "n", "lambda", "query", "seed", "wall_ms", "repeats", "answer", "doubling_ratio"]
    if out_path:
        with open(out_path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            w.writerows(rows)
    if plot_path:
        with open(plot_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["engine", "n", "median_ms"])
            keys = sorted({(r["engine"], r["n"]) for r in rows})
            for eng, n in keys:
                ts = sorted(r["wall_ms"] for r in rows if r["engine"] == eng and r["n"] == n)
                w.writerow([eng, n, ts[len(ts) // 2]])
    return rows


# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="minkselect", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, with_query=False):
        p.add_argument("file", help="problem JSON file, or - for stdin")
        p.add_argument("--engine", default="auto", choices=["auto", "oracle", "deterministic", "randomized"])
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--epsilon", type=float, default=0.0)
        p.add_argument("--mode", choices=["int", "float"], default=None)

    for name in ("select", "rank", "find"):
        common(sub.add_parser(name))
    sub.choices["select"].add_argument("--smallest", action="store_true", help="k-th smallest instead of largest")

    p = sub.add_parser("lcss")
    p.add_argument("file")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p = sub.add_parser("sum-select")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p = sub.add_parser("density")
    p.add_argument("file")
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)

    p = sub.add_parser("bench")
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--engines", nargs="+", default=["selection1"],
                   choices=["selection1", "selection2", "selection2rand", "lcss"])
    p.add_argument("--seeds", type=int, nargs="+", default=[0])
    p.add_argument("--out", default=None)
    p.add_argument("--plot-out", default=None)

    args = ap.parse_args(argv)
    try:
        if args.cmd in ("select", "rank", "find"):
            spec = _load_spec(args.file)
            spec.setdefault("query", {})["kind"] = spec.get("query", {}).get("kind", args.cmd)
            if spec["query"]["kind"] != args.cmd:
                raise InputError(f"problem file query kind is {spec['query']['kind']!r}")
            if args.cmd == "select" and getattr(args, "smallest", False):
                obj = spec.get("objective", {"type": "linear", "coeffs": [0, 1]})
                if obj["type"] != "linear":
                    raise InputError("--smallest needs a linear objective")
                spec["objective"] = {"type": "linear", "coeffs": [-obj["coeffs"][0], -obj["coeffs"][1]]}
                out = run(spec, engine=args.engine, seed=args.seed, eps=args.epsilon, mode=args.mode)
                out["answer"] = _num(-out["answer"])
            else:
                out = run(spec, engine=args.engine, seed=args.seed, eps=args.epsilon, mode=args.mode)
            print(json.dumps(out))
        elif args.cmd == "lcss":
            seq = ingest_sequence(args.file, "plain")
            t0 = time.perf_counter()
            r = lcss_select(seq, args.l, args.u, args.k)
            print(json.dumps({
                "answer": _num(r.statistic), "witness": {"i": r.i, "j": r.j},
                "engine": "lcss", "elapsed_ms": round((time.perf_counter() - t0) * 1e3, 3),
            }))
        elif args.cmd == "sum-select":
            seq = ingest_sequence(args.file, "plain")
            t0 = time.perf_counter()
            r = sum_select(seq, args.k)
            print(json.dumps({
                "answer": _num(r.statistic), "witness": {"i": r.i, "j": r.j},
                "engine": "sum-select", "elapsed_ms": round((time.perf_counter() - t0) * 1e3, 3),
            }))
        elif args.cmd == "density":
            ws = ingest_sequence(args.file, "weighted")
            delta = int(args.delta) if float(args.delta).is_integer() else args.delta
            t0 = time.perf_counter()
            r = density_find(ws, args.l, args.u, delta)
            print(json.dumps({
                "answer": _num(r.statistic), "distance": _num(r.distance),
                "witness": {"i": r.i, "j": r.j},
                "engine": "density", "elapsed_ms": round((time.perf_counter() - t0) * 1e3, 3),
            }))
        elif args.cmd == "bench":
            rows = bench(args.sizes, args.engines, args.seeds, args.out, args.plot_out)
            if not args.out:
                for row in rows:
                    print(json.dumps(row))
        return EXIT_OK
    except (InputError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (RankRangeError, NoFeasibleValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANK
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except MinkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
