"""Command-line front end: construct, verify, search, analyze and tabulate.

Exit codes: 0 success, 1 verification false, 2 usage or parse error,
3 internal inconsistency (a constructed set failed its own certificate),
4 time budget exhausted under --strict.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sidonlab import __version__, analysis, constructions, finite_field, search, verify
from sidonlab.errors import SidonLabError, TimeBudgetExceeded
from sidonlab.sets import CertifiedSet, IntegerSet, ModularSet

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3
EXIT_BUDGET = 4


class ParseError(SidonLabError, ValueError):
    """Malformed set file."""


@dataclass
class OutputRecord:
    """What every command emits: echo, parameters, payload and provenance.

    All fields hold plain JSON values, so ``from_json(to_json())`` gives
    back an equal record.
    """

    command: str
    parameters: Dict[str, Any]
    result: Dict[str, Any]
    provenance: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = EXIT_OK

    def to_json(self) -> str:
        body = {
            "command": self.command,
            "parameters": self.parameters,
            "result": self.result,
            "provenance": self.provenance,
        }
        return json.dumps(body, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        d = json.loads(text)
        return cls(d["command"], d["parameters"], d["result"], d["provenance"])


def _plain(x):
    """Coerce to JSON-native values (tuples to lists, dict keys to str)."""
    return json.loads(json.dumps(x))


# ------------------------------------------------------------------ set files


def parse_set_text(text: str) -> Tuple[List[int], Optional[int]]:
    """One integer per line, '#' comments, optional 'mod N' header line."""
    els: List[int] = []
    modulus = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("mod"):
            if els or modulus is not None:
                raise ParseError(f"line {lineno}: 'mod' header must come before the elements")
            try:
                modulus = int(line[3:].strip())
            except ValueError:
                raise ParseError(f"line {lineno}: bad modulus {line!r}") from None
            if modulus < 1:
                raise ParseError(f"line {lineno}: modulus must be >= 1")
            continue
        try:
            els.append(int(line))
        except ValueError:
            raise ParseError(f"line {lineno}: not an integer: {line!r}") from None
    return els, modulus


def read_set_file(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(str(exc)) from None
    els, modulus = parse_set_text(text)
    if modulus is not None:
        return ModularSet(modulus, els)
    if any(a < 0 for a in els):
        raise ParseError("integer sets must be nonnegative (use a 'mod N' header for residues)")
    return IntegerSet(els)


# ------------------------------------------------------------------ rendering


def _set_payload(S) -> Dict[str, Any]:
    out: Dict[str, Any] = {"elements": list(S.elements), "size": len(S)}
    if isinstance(S, ModularSet):
        out["modulus"] = S.modulus
    return out


def _certified_payload(cs: CertifiedSet) -> Dict[str, Any]:
    c = cs.certificate
    ok = cs.verify()
    payload = _set_payload(cs.set)
    payload["certificate"] = {
        "construction": c.construction,
        "h": c.h,
        "g": c.g,
        "modulus": c.modulus,
        "params": {k: v if isinstance(v, (int, float, str)) else repr(v) for k, v in c.params.items()},
    }
    payload["verified"] = ok
    return _plain(payload)


def _search_payload(res: search.SearchResult) -> Dict[str, Any]:
    ws = []
    for w in res.witnesses:
        ws.append(list(w.elements))
    return _plain({
        "problem": res.problem,
        "optimum": res.optimum,
        "exactness": res.status,
        "witnesses": ws,
        "count": res.count,
        "stats": {"nodes": res.stats.nodes, "prunes": res.stats.prunes},
    })


def _write_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _csv_for(rec: OutputRecord) -> str:
    r = rec.result
    if "table" in r:
        return _write_csv(r["table"]["header"], r["table"]["rows"])
    if rec.command == "search":
        rows = [[r["problem"], r["optimum"], r["exactness"], " ".join(map(str, w))] for w in r["witnesses"]]
        if not rows:
            rows = [[r["problem"], r["optimum"], r["exactness"], ""]]
        return _write_csv(["problem", "optimum", "exactness", "witness"], rows)
    if "elements" in r:
        return _write_csv(["element"], [[a] for a in r["elements"]])
    flat = [[k, json.dumps(v, sort_keys=True)] for k, v in sorted(r.items())]
    return _write_csv(["key", "value"], flat)


def _plain_for(rec: OutputRecord) -> str:
    r = rec.result
    lines = []
    if "table" in r:
        lines.append("\t".join(r["table"]["header"]))
        lines.extend("\t".join(str(c) for c in row) for row in r["table"]["rows"])
        return "\n".join(lines) + "\n"
    if "elements" in r:
        lines.append(" ".join(map(str, r["elements"])))
    if rec.command == "search":
        lines.append(f"optimum {r['optimum']} ({r['exactness']})")
        lines.extend(" ".join(map(str, w)) for w in r["witnesses"])
        if r.get("count") is not None:
            lines.append(f"count {r['count']}")
    for key in ("verdict", "worst", "certificate", "verified", "intervals", "class_counts", "partial_sums"):
        if key in r:
            lines.append(f"{key}: {json.dumps(r[key], sort_keys=True)}")
    return "\n".join(lines) + "\n"


def emit(rec: OutputRecord, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(rec.to_json() + "\n")
    elif fmt == "csv":
        out.write(_csv_for(rec))
    else:
        out.write(_plain_for(rec))


# ------------------------------------------------------------------ commands


def _ints(text: Optional[str]) -> List[int]:
    if not text:
        return []
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"expected a list of integers, got {text!r}") from None


def _config(args, mode: str = "first") -> search.SearchConfig:
    budget = args.budget
    if budget is None and os.environ.get("SIDONLAB_BUDGET_SECS"):
        budget = float(os.environ["SIDONLAB_BUDGET_SECS"])
    return search.SearchConfig(mode=mode, time_budget=budget, workers=args.workers,
                               checkpoint=getattr(args, "checkpoint", None))


def cmd_construct(args) -> OutputRecord:
    name = args.construction
    if name == "greedy":
        cs = constructions.greedy(args.h, args.g, _ints(args.seeds) or [1], args.count)
    elif name == "ruzsa":
        p = _need(args.p, "--p")
        theta = args.theta
        if theta is None:
            if not finite_field.is_prime(p):
                raise ParseError(f"{p} is not prime")
            theta = finite_field.find_primitive(finite_field.make_field(p)).code
        K = _ints(args.K)
        cs = constructions.ruzsa_union(p, theta, K) if K else constructions.ruzsa_set(p, theta, args.k)
    elif name == "bose":
        K = _ints(args.K)
        q = _need(args.q, "--q")
        cs = constructions.bose_union(q, K) if K else constructions.bose_set(args.h, q, args.k)
    elif name == "singer":
        cs = constructions.singer_set(args.h, _need(args.q, "--q"))
    elif name == "erdos-turan":
        cs = constructions.erdos_turan_set(_need(args.p, "--p"))
    elif name == "interleave":
        cs = constructions.interleave(read_set_file(_need(args.file, "--file")), args.m, args.h)
    elif name == "crt":
        A = read_set_file(_need(args.file_a, "--file-a"))
        B = read_set_file(_need(args.file_b, "--file-b"))
        if not (isinstance(A, ModularSet) and isinstance(B, ModularSet)):
            raise ParseError("crt needs two files with 'mod N' headers")
        cs = constructions.crt_combine(A, B, args.h)
    elif name == "random":
        sample = constructions.random_bstar_set(args.g, args.epsilon, args.N, args.seed)
        cs = sample.pruned()
    else:  # pragma: no cover - argparse restricts the choices
        raise ParseError(f"unknown construction {name}")
    payload = _certified_payload(cs)
    params = {k: v for k, v in vars(args).items() if k not in ("func", "format", "command")}
    rec = OutputRecord("construct", _plain(params), payload)
    if not payload["verified"]:
        rec.exit_code = EXIT_INTERNAL
    return rec


def cmd_verify(args) -> OutputRecord:
    S = read_set_file(args.file)
    modulus = args.mod if args.mod is not None else (S.modulus if isinstance(S, ModularSet) else None)
    if modulus is not None:
        if isinstance(S, IntegerSet):
            S = ModularSet(modulus, S.elements)
        ok = verify.is_bstar_mod(S, args.h, args.g, modulus)
        prof = verify.convolution_counts(S, args.h, modulus=modulus)
    else:
        ok = verify.is_bstar(S, args.h, args.g)
        prof = verify.convolution_counts(S, args.h)
    worst = prof.worst()
    result = {
        "verdict": "PASS" if ok else "FAIL",
        "profile": [[k, prof.counts[k]] for k in sorted(prof.counts)],
        "worst": list(worst) if worst else None,
        "size": len(S),
    }
    params = {"file": args.file, "h": args.h, "g": args.g, "mod": modulus}
    rec = OutputRecord("verify", params, _plain(result))
    rec.exit_code = EXIT_OK if ok else EXIT_FALSE
    return rec


def cmd_search(args) -> OutputRecord:
    mode = "count" if args.count_only else ("all" if args.all_witnesses else "first")
    cfg = _config(args, mode)
    params = {"problem": args.problem, "h": args.h, "g": args.g, "n": args.n, "k": args.k, "mode": mode}
    try:
        if args.problem == "R":
            res = search.max_bstar_subset(_need(args.n, "--n"), args.h, args.g, cfg)
        elif args.problem == "C":
            res = search.max_modular(_need(args.n, "--n"), args.h, args.g, cfg)
        else:
            res = search.shortest_sidon(_need(args.k, "--k"), cfg)
        rec = OutputRecord("search", params, _search_payload(res))
    except TimeBudgetExceeded as exc:
        payload = _search_payload(exc.partial) if exc.partial is not None else {"exactness": search.LOWER_BOUND}
        payload["budget_exhausted"] = True
        rec = OutputRecord("search", params, payload)
        rec.exit_code = EXIT_BUDGET if args.strict else EXIT_OK
    return rec


def _need(v, flag):
    if v is None:
        raise ParseError(f"{flag} is required for this problem")
    return v


def cmd_tables(args) -> OutputRecord:
    cfg = _config(args)
    params = {k: v for k, v in vars(args).items() if k not in ("func", "format", "command", "workers", "budget")}
    budget_hit = False
    if args.table == "shortest-sidon":
        header = ["k", "diameter", "exactness", "witness"]
        rows = []
        for k in range(2, args.max_k + 1):
            try:
                res = search.shortest_sidon(k, cfg)
                rows.append([k, res.optimum, res.status, " ".join(map(str, res.witnesses[0].elements))])
            except TimeBudgetExceeded as exc:
                budget_hit = True
                p = exc.partial
                rows.append([k, p.optimum if p else "", search.LOWER_BOUND, ""])
                break
    elif args.table == "min-n":
        header = ["g", "k", "min_n", "exactness"]
        rows = []
        for g in range(2, args.max_g + 1):
            for k in range(1, args.max_k + 1):
                try:
                    rows.append([g, k, search.min_n_for_size(2, g, k, cfg), search.EXACT])
                except TimeBudgetExceeded as exc:
                    budget_hit = True
                    rows.append([g, k, exc.partial.optimum if exc.partial else "", search.LOWER_BOUND])
    else:
        header = ["k", "gamma_k", "log_k_gamma_k"]
        terms = constructions.greedy_extend(args.h, args.g, [1], max(args.count, 2))
        pts = analysis.greedy_growth_data(args.h, args.g, (1,), max(args.count, 2))
        rows = [[k, terms[k - 1], repr(v)] for k, v in pts]
    rec = OutputRecord("tables", _plain(params), _plain({"table": {"header": header, "rows": rows}}))
    if budget_hit and args.strict:
        rec.exit_code = EXIT_BUDGET
    return rec


def cmd_analyze(args) -> OutputRecord:
    S = read_set_file(args.file)
    params = {"file": args.file, "analysis": args.analysis}
    if args.analysis == "sumset-intervals":
        d = analysis.sumset_intervals(S)
        result = {"intervals": [list(iv) for iv in d.intervals], "count": d.count, "longest": d.longest,
                  "per_square": d.per_square}
    elif args.analysis == "residues":
        params["m"] = args.m
        r = analysis.residue_distribution(S, args.m)
        result = {"class_counts": list(r.class_counts), "discrepancy": r.discrepancy, "parity_gap": r.parity_gap}
    else:
        prefixes = _ints(args.prefixes) or None
        params["prefixes"] = prefixes
        rs = analysis.reciprocal_sum(S, prefixes)
        result = {"partial_sums": [[n, f"{s.numerator}/{s.denominator}", float(s)]
                                   for n, s in zip(rs.lengths, rs.exact)]}
    return OutputRecord("analyze", _plain(params), _plain(result))


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sidonlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"sidonlab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "csv", "json"), default="plain")
    common.add_argument("--seed", type=int, default=None, help="random seed (recorded in provenance)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build a certified set")
    c.add_argument("construction", choices=("greedy", "ruzsa", "bose", "singer", "erdos-turan", "interleave",
                                            "crt", "random"))
    c.add_argument("--h", type=int, default=2)
    c.add_argument("--g", type=int, default=2)
    c.add_argument("--count", type=int, default=10)
    c.add_argument("--seeds", help="comma separated seed prefix for greedy")
    c.add_argument("--p", type=int)
    c.add_argument("--q", type=int)
    c.add_argument("--theta", type=int)
    c.add_argument("--k", type=int, default=1)
    c.add_argument("--K", help="comma separated scalars for a union")
    c.add_argument("--m", type=int, default=2)
    c.add_argument("--file")
    c.add_argument("--file-a")
    c.add_argument("--file-b")
    c.add_argument("--epsilon", type=float, default=0.45)
    c.add_argument("--N", type=int, default=1000)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="check a set file")
    v.add_argument("--file", required=True)
    v.add_argument("--h", type=int, default=2)
    v.add_argument("--g", type=int, default=2)
    v.add_argument("--mod", type=int)
    v.set_defaults(func=cmd_verify)

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--budget", type=float, default=None,
                        help="seconds; defaults to $SIDONLAB_BUDGET_SECS, else unlimited")
    budget.add_argument("--workers", type=int, default=1)
    budget.add_argument("--strict", action="store_true", help="exit 4 when the budget runs out")

    s = sub.add_parser("search", parents=[common, budget], help="exact optimisation")
    s.add_argument("problem", choices=("R", "C", "shortest"))
    s.add_argument("--h", type=int, default=2)
    s.add_argument("--g", type=int, default=2)
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--all-witnesses", action="store_true")
    s.add_argument("--count-only", action="store_true")
    s.add_argument("--checkpoint", help="JSON checkpoint file for shortest")
    s.set_defaults(func=cmd_search)

    t = sub.add_parser("tables", parents=[common, budget], help="reproduce the standard tables")
    t.add_argument("table", choices=("shortest-sidon", "min-n", "greedy-growth"))
    t.add_argument("--max-k", type=int, default=8)
    t.add_argument("--max-g", type=int, default=4)
    t.add_argument("--count", type=int, default=20)
    t.add_argument("--h", type=int, default=2)
    t.add_argument("--g", type=int, default=2)
    t.set_defaults(func=cmd_tables)

    a = sub.add_parser("analyze", parents=[common], help="statistics of a set file")
    a.add_argument("analysis", choices=("sumset-intervals", "residues", "reciprocal"))
    a.add_argument("--file", required=True)
    a.add_argument("--m", type=int, default=2)
    a.add_argument("--prefixes")
    a.set_defaults(func=cmd_analyze)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.monotonic()
    try:
        rec = args.func(args)
    except TimeBudgetExceeded as exc:
        err.write(f"sidonlab: {exc}\n")
        return EXIT_BUDGET
    except (ValueError, SidonLabError) as exc:
        err.write(f"sidonlab: {exc}\n")
        return EXIT_USAGE
    rec.provenance = {"version": __version__, "seed": args.seed, "wall_time": round(time.monotonic() - start, 6)}
    emit(rec, args.format, out)
    if rec.exit_code == EXIT_INTERNAL:
        err.write("sidonlab: constructed set failed re-verification\n")
    return rec.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
