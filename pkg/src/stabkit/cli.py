"""Command-line entry point.

Subcommands: canon, verify, sample, bounds, simulate, count.  Output is
JSON (exact rationals as "num/den" strings); matrix payloads switch to
the shared text format with --format text, and sweeps emit CSV rows.
Runs with identical flags, seed, and input produce byte-identical
output.  Exit codes: 0 success, 1 domain error (JSON error object),
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import bounds as bnd
from . import canon, mc
from . import sample as smp
from .gf2 import Gf2Error, Gf2Matrix, format_matrix, parse_matrix
from .moves import is_stabilizer_pcm, is_symplectic


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _frac_str(x) -> str | float:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


def _read_matrix(path: str) -> Gf2Matrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def _seed_from(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SEED")
    if env is not None:
        return int(env)
    raise UsageError("a seed is required (--seed or the SEED environment variable)")


def _parse_channel(name: str, delta: str):
    d = Fraction(delta)
    if name == "erasure":
        return bnd.ErasureChannel(d)
    if name == "depolarizing":
        return bnd.DepolarizingChannel(d)
    raise UsageError(f"unknown channel {name!r}")


# -- subcommand handlers -----------------------------------------------------


def _cmd_canon(args) -> int:
    if args.kind == "reconstruct":
        with open(args.infile, "r", encoding="utf-8") as fh:
            q = canon.quintuple_from_dict(json.load(fh))
        mat = canon.reconstruct(q)
        if args.format == "text":
            print(format_matrix(mat))
        else:
            _emit({"matrix": format_matrix(mat).splitlines()})
        return 0
    a = _read_matrix(args.infile)
    mode = {"unrestricted": canon.MODE_UNRESTRICTED,
            "pcm": canon.MODE_STABILIZER,
            "symplectic": canon.MODE_SYMPLECTIC}[args.kind]
    q = canon.decompose(a, mode)
    out = canon.quintuple_to_dict(q)
    if args.gates:
        if mode != canon.MODE_SYMPLECTIC:
            raise Gf2Error("gate translation is only defined for symplectic input")
        out["gates"] = canon.gates_to_dicts(canon.to_gates(q))
    _emit(out)
    return 0


def _cmd_verify(args) -> int:
    a = _read_matrix(args.infile)
    if args.symplectic:
        ok = is_symplectic(a)
        check = "symplectic"
    else:
        ok = is_stabilizer_pcm(a)
        check = "pcm"
    _emit({"check": check, "ok": bool(ok), "rows": a.rows, "cols": a.cols})
    return 0


def _matrices_out(mats, args) -> None:
    if args.format == "text":
        chunks = [format_matrix(m) for m in mats]
        print("\n\n".join(chunks))
    else:
        _emit({"matrices": [format_matrix(m).splitlines() for m in mats]})


def _cmd_sample(args) -> int:
    seed = _seed_from(args)
    rng = smp.make_rng(seed, args.stream)
    if args.kind == "symplectic":
        mats = [smp.sample_symplectic(args.n, rng) for _ in range(args.count)]
    else:
        if args.rank is None:
            raise UsageError("sample pcm requires --rank")
        mats = [smp.sample_stabilizer_pcm(args.m, args.n, args.rank, rng)
                for _ in range(args.count)]
    _matrices_out(mats, args)
    return 0


def _cmd_count(args) -> int:
    if args.kind == "symplectic":
        _emit({"kind": "symplectic", "n": args.n, "count": str(smp.count_symplectic(args.n))})
        return 0
    if args.rank is not None:
        c = smp.count_stabilizer_pcm(args.m, args.n, args.rank)
        _emit({"kind": "pcm", "m": args.m, "n": args.n, "rank": args.rank, "count": str(c)})
    else:
        per = {r: smp.count_stabilizer_pcm(args.m, args.n, r)
               for r in range(min(args.m, args.n) + 1)}
        _emit({
            "kind": "pcm", "m": args.m, "n": args.n,
            "count": str(sum(per.values())),
            "by_rank": {str(r): str(c) for r, c in per.items()},
        })
    return 0


def _bound_row(res: bnd.BoundResult) -> dict:
    return {
        "n": res.n, "m": res.m,
        "rate": _frac_str(res.rate),
        "p_conv": _frac_str(res.p_conv),
        "p_ach": _frac_str(res.p_ach),
        "exact": res.exact,
    }


def _cmd_bounds(args) -> int:
    if args.kind == "generic":
        with open(args.dist, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
        table = bnd.DistTable.from_dicts(spec["n"], spec["entries"])
        channel = bnd.TableChannel(table)
        n = table.n
        exact = True
    else:
        channel = _parse_channel(args.kind, args.delta)
        n = args.n
        exact = args.exact if args.exact is not None else n <= 128

    if args.sweep:
        return _bounds_sweep(args, channel, n, exact)

    if args.m is not None:
        res = bnd.channel_bounds(channel, n, args.m, exact=exact)
        _emit(_bound_row(res))
        return 0
    if args.epsilon is None:
        raise UsageError("bounds requires --m or --epsilon")
    eps = Fraction(args.epsilon)
    rs = bnd.rate_search(channel, n, eps, exact=exact)
    out = {
        "n": n,
        "epsilon": _frac_str(eps),
        "r_ach": _frac_str(rs.r_ach),
        "r_conv": _frac_str(rs.r_conv),
        "m_ach": rs.m_ach,
        "m_conv": rs.m_conv,
        "ach_feasible": rs.ach_feasible,
        "conv_found": rs.conv_found,
        "exact": exact,
    }
    if not isinstance(channel, bnd.TableChannel):
        d = float(channel.delta)
        if 0 < d < 1 and args.epsilon is not None:
            out["asymptotic"] = bnd.asymptotic_rate(channel, n, float(eps))
    _emit(out)
    return 0


def _bounds_sweep(args, channel, n, exact) -> int:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "m", "rate", "p_conv", "p_ach", "exact"])

    def row(res):
        writer.writerow([res.n, res.m, _frac_str(res.rate),
                         _frac_str(res.p_conv), _frac_str(res.p_ach), res.exact])

    if args.sweep == "m":
        top = 2 * n if isinstance(channel, bnd.DepolarizingChannel) else n
        points = [(n, m) for m in range(top + 1)]
    else:
        values = [int(v) for v in (args.values.split(",") if args.values else [])]
        if not values:
            values = [1 << k for k in range(3, max(4, n.bit_length()))]
        if args.m is None:
            raise UsageError("--sweep n requires --m")
        points = [(nv, args.m) for nv in values]

    def compute(point):
        nv, mv = point
        ex = exact if args.exact is not None else nv <= 128
        return bnd.channel_bounds(channel, nv, mv, exact=ex)

    if args.threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            for res in pool.map(compute, points):
                row(res)
    else:
        for p in points:
            row(compute(p))
    return 0


def _cmd_simulate(args) -> int:
    seed = _seed_from(args)
    channel = _parse_channel(args.channel, args.delta)
    cfg = mc.TrialConfig(channel, args.n, args.m, args.trials, seed,
                         fresh_matrix=not args.fixed_matrix,
                         full_search=args.full_search)
    res = mc.estimate_error(cfg, threads=args.threads)
    exact = args.n <= 128
    b = bnd.channel_bounds(channel, args.n, args.m, exact=exact)
    _emit({
        "n": args.n, "m": args.m,
        "trials": res.trials,
        "failures": res.failures,
        "p_hat": res.p_hat,
        "ci95": list(res.ci95),
        "p_conv": _frac_str(b.p_conv),
        "p_ach": _frac_str(b.p_ach),
        "exact_bounds": exact,
        "fixed_matrix": args.fixed_matrix,
    })
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="stabkit", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    pc = sub.add_parser("canon", help="canonical decomposition of a matrix file")
    pc.add_argument("kind", choices=["unrestricted", "pcm", "symplectic", "reconstruct"])
    pc.add_argument("--in", dest="infile", required=True)
    pc.add_argument("--gates", action="store_true", help="append the gate list (symplectic only)")
    pc.add_argument("--format", choices=["text", "json"], default="json")
    pc.set_defaults(fn=_cmd_canon)

    pv = sub.add_parser("verify", help="membership checks on a matrix file")
    g = pv.add_mutually_exclusive_group(required=True)
    g.add_argument("--symplectic", action="store_true")
    g.add_argument("--pcm", action="store_true")
    pv.add_argument("--in", dest="infile", required=True)
    pv.set_defaults(fn=_cmd_verify)

    ps = sub.add_parser("sample", help="uniform sampling with a seeded PRNG")
    ps.add_argument("kind", choices=["symplectic", "pcm"])
    ps.add_argument("--n", type=int, required=True, help="qubit count")
    ps.add_argument("--m", type=int, default=0, help="rows (pcm)")
    ps.add_argument("--rank", type=int)
    ps.add_argument("--count", type=int, default=1)
    ps.add_argument("--seed", type=int)
    ps.add_argument("--stream", type=int, default=0)
    ps.add_argument("--format", choices=["text", "json"], default="json")
    ps.set_defaults(fn=_cmd_sample)

    pn = sub.add_parser("count", help="exact cardinalities")
    pn.add_argument("kind", choices=["symplectic", "pcm"])
    pn.add_argument("--n", type=int, required=True)
    pn.add_argument("--m", type=int, default=0)
    pn.add_argument("--rank", type=int)
    pn.set_defaults(fn=_cmd_count)

    pb = sub.add_parser("bounds", help="finite-blocklength bounds")
    pb.add_argument("kind", choices=["erasure", "depolarizing", "generic"])
    pb.add_argument("--n", type=int)
    pb.add_argument("--delta", type=str)
    pb.add_argument("--dist", type=str, help="distribution table JSON (generic)")
    pb.add_argument("--m", type=int)
    pb.add_argument("--epsilon", type=str)
    pb.add_argument("--sweep", choices=["m", "n"])
    pb.add_argument("--values", type=str, help="comma-separated n values for --sweep n")
    pb.add_argument("--exact", action=argparse.BooleanOptionalAction, default=None)
    pb.add_argument("--threads", type=int, default=1)
    pb.set_defaults(fn=_cmd_bounds)

    pm = sub.add_parser("simulate", help="Monte-Carlo decoder simulation")
    pm.add_argument("--channel", choices=["erasure", "depolarizing"], required=True)
    pm.add_argument("--n", type=int, required=True)
    pm.add_argument("--delta", type=str, required=True)
    pm.add_argument("--m", type=int, required=True)
    pm.add_argument("--trials", type=int, required=True)
    pm.add_argument("--seed", type=int)
    pm.add_argument("--fixed-matrix", action="store_true")
    pm.add_argument("--full-search", action="store_true")
    pm.add_argument("--threads", type=int, default=1)
    pm.set_defaults(fn=_cmd_simulate)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.cmd == "bounds" and args.kind != "generic":
            if args.n is None or args.delta is None:
                raise UsageError(f"bounds {args.kind} requires --n and --delta")
        if args.cmd == "bounds" and args.kind == "generic" and not args.dist:
            raise UsageError("bounds generic requires --dist")
        return args.fn(args)
    except UsageError as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}))
        return 2
    except (Gf2Error, OSError, ValueError, KeyError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
