"""Command line front end.

    ellsurf analyze "y^2 = x^3 + t^4 + t^2" --prime auto
    ellsurf delsarte "y^2 = x^3 + t^360 + 1"
    ellsurf split "x^3-x^2-3*x+1" "x^2-x-1"
    ellsurf chebotarev "x^3-2" --primes 5:2000
    ellsurf e68 --prime 7 --prime 13
    ellsurf lift 9 --prime 11

Every command can print JSON (--json) or write it to a file (--out).  The
exit status is 0 only when every check in the result passes.  Results are
cached under ELLSURF_CACHE_DIR; ELLSURF_WORKERS sets the process count used
by the e68 command.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .. import __version__
from ..exactalg import GF, QQ, FiniteField
from .cache import ResultCache
from .parser import ParseError, format_model, parse_equation, parse_polynomial
from .serialize import SCHEMA, dumps, fibre_to_json, section_to_json, surface_to_json

ENV_WORKERS = "ELLSURF_WORKERS"


class UsageError(ValueError):
    pass


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(ENV_WORKERS, "") or os.cpu_count() or 1))
    except ValueError:
        return 1


def _field(text):
    """'Q', 'p', 'Fp', 'p^k' or 'F_p^k'."""
    if text is None or text.upper() == "Q":
        return QQ
    s = text.upper().replace("F_", "").replace("F", "").replace("GF", "")
    try:
        if "^" in s:
            p, k = s.split("^")
            return GF(int(p), int(k))
        return GF(int(s))
    except ValueError as exc:
        raise UsageError(f"bad field {text!r}: {exc}") from None


def _check(name, expected, got, ok=None):
    ok = expected == got if ok is None else ok
    return {"name": name, "expected": expected, "got": got, "status": "pass" if ok else "fail"}


# ---------------------------------------------------------------------------
# commands; each returns a JSON-ready dict with a "checks" list
# ---------------------------------------------------------------------------


def cmd_analyze(args) -> dict:
    from ..fibres import euler_data, fibre_inventory, shioda_tate_rank

    spec = parse_equation(args.equation)
    F = _field(args.field)
    E = spec.model if F == QQ else spec.model.extend(F, F)
    fib = fibre_inventory(E)
    e, b2, _ = euler_data(E, fib)
    out = {
        "surface": surface_to_json(E),
        "equation": format_model(E),
        "transform": spec.transform,
        "fibres": [fibre_to_json(f) for f in fib],
        "euler": e,
        "b2": b2,
        "checks": [_check("Euler sum equals 12 chi", 12 * E.chi, e)],
    }
    rank = None
    if E.chi == 1:
        rank = shioda_tate_rank(E, fibres=fib)
        out["rank"] = {"value": rank, "method": "Shioda-Tate"}
    elif spec.delsarte_rows and F == QQ:
        from ..delsarte import delsarte_rank

        rank = delsarte_rank(spec.delsarte(), E, fib)
        out["rank"] = {"value": rank, "method": "Delsarte"}
    if args.expect_rank is not None:
        out["checks"].append(_check("rank", args.expect_rank, rank))
    if args.prime is not None and E.chi <= 2:
        out["sections"] = _sections_block(E, args, rank)
        out["checks"].extend(out["sections"].pop("checks"))
    return out


def _sections_block(E, args, rank):
    from ..sections import choose_good_prime, search_integral, search_via_ideal, span_rank

    if isinstance(E.ring, FiniteField):
        Ep = E
    else:
        p = choose_good_prime(E) if args.prime == "auto" else int(args.prime)
        Ep = E.extend(GF(p), GF(p))
    if args.backend == "brute":
        S = search_integral(Ep)
    else:
        S = search_via_ideal(Ep)
    secs = list(S)
    r = span_rank(S.model, secs) if secs else 0
    blk = {
        "field": repr(S.model.ring),
        "backend": args.backend,
        "count": len(secs),
        "gram_rank": r,
        "complete_over_closure": args.backend == "ideal",
        "checks": [],
    }
    if args.list_sections:
        blk["list"] = [section_to_json(P) for P in secs]
    if args.backend == "ideal" and rank is not None:
        blk["checks"].append(_check("Gram rank of integral sections equals the rank", rank, r))
    return blk


def cmd_delsarte(args) -> dict:
    from ..delsarte import delsarte_rank, group_L, lambda_count
    from ..fibres import euler_data, fibre_inventory

    spec = parse_equation(args.equation)
    S = spec.delsarte()
    if S is None:
        raise UsageError("equation does not have exactly four monomials")
    E = spec.model
    fib = fibre_inventory(E)
    e, b2, _ = euler_data(E, fib)
    lam = lambda_count(group_L(S))
    r = delsarte_rank(S, E, fib)
    out = {
        "surface": surface_to_json(E),
        "matrix": [list(row) for row in S.matrix],
        "lambda": lam,
        "b2": b2,
        "picard": b2 - lam,
        "rank": r,
        "checks": [_check("Euler sum equals 12 chi", 12 * E.chi, e)],
    }
    if args.expect_rank is not None:
        out["checks"].append(_check("rank", args.expect_rank, r))
    return out


def cmd_split(args) -> dict:
    from ..splitfield import apply_aut, split_aut_grp

    fs = [parse_polynomial(s) for s in args.polynomials]
    t0 = time.perf_counter()
    R = split_aut_grp(fs, p=None if args.prime in (None, "auto") else int(args.prime), max_degree=args.max_degree)
    g = R.field.g
    verified = sum(1 for a in R.aut_of_field if apply_aut(a.image, g, g).is_zero())
    out = {
        "degree": R.field.degree,
        "defining_polynomial": [str(c) for c in g.coeffs],
        "group": R.name,
        "order": len(R.group),
        "prime": R.prime,
        "seconds": round(time.perf_counter() - t0, 3),
        "checks": [
            _check("group order equals field degree", R.field.degree, len(R.group)),
            _check("automorphisms verified exactly", len(R.group), verified),
        ],
    }
    if args.expect_degree is not None:
        out["checks"].append(_check("degree", args.expect_degree, R.field.degree))
    return out


def _prime_range(text):
    if ":" in text:
        lo, hi = text.split(":")
        return (int(lo), int(hi))
    return [int(x) for x in text.split(",")]


def cmd_chebotarev(args) -> dict:
    from ..splitfield import chebotarev_estimate

    fs = [parse_polynomial(s) for s in args.polynomials]
    est = chebotarev_estimate(fs, _prime_range(args.primes))
    out = est.to_dict()
    out["checks"] = []
    if args.expect_order is not None:
        n = args.expect_order
        out["checks"].append(_check("every k_p divides the order", n, n, all(n % k == 0 for _, k in est.samples)))
    return out


def cmd_e68(args) -> dict:
    from .e68 import E68Config, verify_e68

    primes = tuple(int(p) for p in args.prime) if args.prime else E68Config.primes
    cfg = E68Config(primes=primes, lift_samples=args.samples, workers=_workers())
    if args.no_sections:
        cfg.frobenius = cfg.lifts = False
    log = (lambda m: print(m, file=sys.stderr)) if args.verbose else None
    R = verify_e68(cfg, log=log)
    return R.to_dict()


def cmd_lift(args) -> dict:
    from .e68 import _fifth_root, block_search, lift_to_e68, subsurface

    S = subsurface(args.surface)
    p = int(args.prime)
    found = block_search(S, p)
    secs = [P for P in found if not P.is_zero()][: args.samples]
    K = found.model.ring
    zeta = _fifth_root(K) if S.is_k3 and args.twist else None
    if S.is_k3 and args.twist and zeta is None:
        raise UsageError(f"no fifth root of unity in {K!r}; pick p = 1 mod 5")
    lifted = []
    ok = 0
    for P in secs:
        L = lift_to_e68(S, P, zeta=zeta, check=False)
        good = L.satisfies_e68()
        ok += good
        lifted.append({
            "section": section_to_json(P),
            "x": {str(k): _enc(K, v) for k, v in sorted(L.x.items(), reverse=True)},
            "y": {str(k): _enc(K, v) for k, v in sorted(L.y.items(), reverse=True)},
            "on_e68": good,
        })
    return {
        "surface": S.key,
        "pattern": S.pattern(),
        "field": repr(K),
        "lifts": lifted,
        "checks": [_check("lifted sections satisfy y^2 = x^3 + T^360 + 1", len(secs), ok)],
    }


def _enc(K, v):
    from .serialize import scalar_to_json

    return scalar_to_json(K, v)


# ---------------------------------------------------------------------------


def _render(kind, res) -> str:
    lines = []
    for k, v in res.items():
        if k in ("checks", "schema", "kind", "surface", "lifts", "samples"):
            continue
        if k == "fibres":
            syms = [f"{f['symbol']}@{f['place']}" for f in v]
            lines.append(f"fibres: {' '.join(syms)}")
            continue
        if isinstance(v, dict) and "list" in v:
            v = {a: b for a, b in v.items() if a != "list"}
        lines.append(f"{k}: {v}")
    if kind == "lift":
        for item in res["lifts"]:
            lines.append(f"  x = {item['x']}  y = {item['y']}  ok={item['on_e68']}")
    for c in res.get("checks", []):
        lines.append(f"{c['status'].upper():4}  {c['name']}: expected {c['expected']}, got {c['got']}")
    return "\n".join(lines)


COMMANDS = {
    "analyze": cmd_analyze,
    "delsarte": cmd_delsarte,
    "split": cmd_split,
    "chebotarev": cmd_chebotarev,
    "e68": cmd_e68,
    "lift": cmd_lift,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellsurf", description="Arithmetic of elliptic surfaces")
    ap.add_argument("--version", action="version", version=f"ellsurf {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON")
    common.add_argument("--out", help="write JSON to this file")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--max-degree", type=int, default=240)
    common.add_argument("--backend", choices=("brute", "ideal"), default="ideal")
    common.add_argument("--field", default=None, help="Q (default), p or p^k")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="fibres, Euler number, rank, integral sections")
    a.add_argument("equation")
    a.add_argument("--prime", help="search sections over the closure of F_p ('auto' picks a good prime)")
    a.add_argument("--expect-rank", type=int)
    a.add_argument("--list-sections", action="store_true")

    d = sub.add_parser("delsarte", parents=[common], help="rank of a four-monomial surface")
    d.add_argument("equation")
    d.add_argument("--expect-rank", type=int)
    d.add_argument("--prime", help=argparse.SUPPRESS)

    s = sub.add_parser("split", parents=[common], help="splitting field and automorphisms")
    s.add_argument("polynomials", nargs="+")
    s.add_argument("--prime")
    s.add_argument("--expect-degree", type=int)

    c = sub.add_parser("chebotarev", parents=[common], help="Frobenius sampling of a splitting field")
    c.add_argument("polynomials", nargs="+")
    c.add_argument("--primes", default="5:4000", help="lo:hi or a comma list")
    c.add_argument("--expect-order", type=int)
    c.add_argument("--prime", help=argparse.SUPPRESS)

    e = sub.add_parser("e68", parents=[common], help="rank-68 consistency report")
    e.add_argument("--prime", action="append", help="sampling prime (repeatable)")
    e.add_argument("--samples", type=int, default=4, help="lifted sections per block")
    e.add_argument("--no-sections", action="store_true", help="ranks only")

    li = sub.add_parser("lift", parents=[common], help="lift sections of a block to the rank-68 surface")
    li.add_argument("surface", help="index 1..11 or key such as t5+1")
    li.add_argument("--prime", default="11")
    li.add_argument("--samples", type=int, default=5)
    li.add_argument("--twist", action="store_true", help="K3 block: use u = zeta T^36 + zeta^-1 T^-36")
    return ap


def _request(args) -> dict:
    skip = {"json", "out", "no_cache", "verbose"}
    return {"version": __version__, "schema": SCHEMA, **{k: v for k, v in sorted(vars(args).items()) if k not in skip}}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    fn = COMMANDS[args.command]
    cache = ResultCache(enabled=not args.no_cache)
    req = _request(args)

    def compute():
        res = fn(args)
        res = {"schema": SCHEMA, "kind": args.command, **res}
        return dumps(res)

    try:
        text, hit = cache.fetch(req, compute)
    except (ParseError, UsageError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    import json

    res = json.loads(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.json:
        print(text)
    elif not args.out:
        print(_render(args.command, res))
    if args.verbose and hit:
        print("(cached)", file=sys.stderr)
    return 0 if all(c["status"] != "fail" for c in res.get("checks", [])) else 1


if __name__ == "__main__":
    sys.exit(main())
