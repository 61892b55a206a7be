"""Command-line front end.

    thuemahler [--seed N] [--threads N] [--format json|csv] [--config FILE]
               <group> <command> [options]

Options may also come from a key=value config file (``--config``); flags
given on the command line win. Results are cached when ``--cache-dir`` or the
THUEMAHLER_CACHE_DIR environment variable names a directory.

Exit status: 0 success, 2 usage or config error, 3 domain error, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from . import approx, arith, bounds, cache, count, forms, padic, solve
from .errors import DomainError

log = logging.getLogger("thuemahler")

REQ = object()  # marks a required parameter


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- value types


def big(x):
    """JSON-safe integer: plain number when exact in a double, else a string."""
    x = int(x)
    return x if abs(x) < 2**53 else str(x)


def _form(text):
    text = str(text).strip()
    if not text.startswith(("[", "{")):
        text = f"[{text}]"  # bare "1,0,0,-2"
    try:
        return forms.parse_form(text)
    except (ValueError, DomainError) as e:
        raise UsageError(f"form: {e}") from None


def _primes(text):
    text = str(text).strip()
    if text in ("", "[]", "none"):
        return ()
    try:
        ps = [int(x) for x in text.strip("[]").split(",") if x.strip()]
        return arith.PrimeSet.of(ps).primes
    except (ValueError, DomainError) as e:
        raise UsageError(f"S: {e}") from None


def _intlist(text):
    try:
        return [int(x) for x in str(text).strip("[]").split(",") if x.strip()]
    except ValueError as e:
        raise UsageError(str(e)) from None


def _frac(text):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(str(e)) from None


def _fraclist(text):
    return [_frac(x) for x in str(text).split(",") if x.strip()]


def _strlist(text):
    return [x.strip() for x in str(text).split(",") if x.strip()]


TYPES = {
    "form": _form, "primes": _primes, "int": int, "float": float, "str": str,
    "frac": _frac, "intlist": _intlist, "fraclist": _fraclist, "strlist": _strlist,
}

# (group, command) -> [(name, type, default)]; single-letter names become -X flags
COMMANDS = {
    ("solve", "thue"): [("form", "form", REQ), ("m", "int", REQ), ("B", "int", REQ),
                        ("certified_bound", "int", None)],
    ("solve", "tm"): [("form", "form", REQ), ("S", "primes", ""), ("B", "int", REQ),
                      ("certified_bound", "int", None)],
    ("solve", "sunit"): [("S", "primes", REQ), ("E", "int", REQ)],
    ("solve", "wsunit"): [("a", "frac", REQ), ("b", "frac", REQ), ("S", "primes", REQ),
                          ("E", "int", REQ)],
    ("count", "A"): [("form", "form", REQ), ("S", "primes", ""), ("Z", "int", REQ),
                     ("margin", "int", 2)],
    ("count", "R"): [("form", "form", REQ), ("Z", "int", REQ), ("margin", "int", 2)],
    ("count", "Rk"): [("form", "form", REQ), ("k", "int", REQ), ("Z", "int", REQ),
                      ("margin", "int", 2)],
    ("count", "Nk"): [("form", "form", REQ), ("k", "int", REQ), ("Z", "int", REQ),
                      ("margin", "int", 2)],
    ("count", "sigma"): [("form", "form", REQ), ("tol", "float", 1e-4),
                         ("method", "str", "quadrature"), ("samples", "int", 400_000)],
    ("count", "sigmaS"): [("form", "form", REQ), ("S", "primes", ""), ("J", "int", 8),
                          ("tol", "float", 1e-4)],
    ("count", "lambda"): [("form", "form", REQ), ("k", "int", REQ), ("pmax", "int", 10_000)],
    ("count", "asym"): [("form", "form", REQ), ("S", "primes", ""), ("Z", "intlist", REQ),
                        ("k", "int", None), ("J", "int", 8), ("tol", "float", 1e-4),
                        ("pmax", "int", 10_000), ("margin", "int", 2)],
    ("count", "richest"): [("form", "form", REQ), ("M", "int", REQ), ("top", "int", 10),
                           ("margin", "int", 2)],
    ("count", "gpfscan"): [("form", "form", REQ), ("B", "int", REQ)],
    ("approx", "tuples"): [("beta", "frac", REQ), ("beta1", "frac", REQ), ("t", "int", REQ)],
    ("approx", "check"): [("form", "form", REQ), ("places", "strlist", "inf"),
                          ("gammas", "fraclist", None), ("roots", "intlist", None),
                          ("k", "frac", REQ), ("beta1", "frac", REQ), ("p", "int", REQ),
                          ("q", "int", REQ), ("N", "int", 40)],
    ("approx", "gap"): [("k", "frac", REQ), ("beta1", "frac", REQ), ("h1", "int", REQ),
                        ("h2", "int", None)],
    ("padic", "roots"): [("form", "form", REQ), ("P", "int", REQ), ("N", "int", REQ)],
    ("padic", "rho"): [("form", "form", REQ), ("m", "intlist", REQ)],
    ("padic", "measure"): [("form", "form", REQ), ("P", "int", REQ), ("J", "int", 8)],
    ("forms", "disc"): [("form", "form", REQ)],
    ("forms", "factor"): [("form", "form", REQ)],
    ("forms", "normalize"): [("form", "form", REQ)],
    ("bounds", "eval"): [("name", "str", REQ)] + [
        (x, "int", None) for x in ("n", "t", "H", "M", "m", "g", "r", "omega_m", "omega_g")
    ] + [(x, "frac", None) for x in ("c0", "c1", "c2", "beta1", "eps")],
    ("bounds", "verify"): [("summary", "str", REQ), ("name", "str", None)],
}

GLOBALS = [("seed", "int", 0), ("threads", "int", 1), ("format", "str", "json")]


def _flags(name):
    return ["-" + name] if len(name) == 1 else ["--" + name.replace("_", "-")]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    g.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    g.add_argument("--config", default=argparse.SUPPRESS, help="key=value file")
    g.add_argument("--cache-dir", default=argparse.SUPPRESS,
                   help=f"result cache (default: ${cache.ENV_VAR})")
    g.add_argument("--no-cache", action="store_true", default=argparse.SUPPRESS)
    g.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                   help="report wall time on stderr")
    p = argparse.ArgumentParser(prog="thuemahler", parents=[common],
                                description="Thue, Thue-Mahler and S-unit computations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = p.add_subparsers(dest="group", required=True)
    subs = {}
    for (grp, cmd), params in COMMANDS.items():
        if grp not in subs:
            subs[grp] = groups.add_parser(grp).add_subparsers(dest="cmd", required=True)
        sp = subs[grp].add_parser(cmd, parents=[common])
        for name, _, _ in params:
            sp.add_argument(*_flags(name), dest=name, default=None)
    return p


def read_config(path) -> dict:
    out = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise UsageError(f"config: {e}") from None
    for i, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"config line {i}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def resolve(args) -> dict:
    """Merge CLI flags over config-file values over defaults; validate types."""
    conf = read_config(args.config) if getattr(args, "config", None) else {}
    key = (args.group, args.cmd)
    known = {n for n, _, _ in COMMANDS[key]} | {n for n, _, _ in GLOBALS} | {"cache_dir"}
    unknown = set(conf) - known
    if unknown:
        raise UsageError(f"config: unknown key(s) {', '.join(sorted(unknown))}")
    cfg = {}
    for name, typ, default in COMMANDS[key] + GLOBALS:
        raw = getattr(args, name, None)
        if raw is None:
            raw = conf.get(name)
        if raw is None:
            if default is REQ:
                raise UsageError(f"missing required parameter {name!r}")
            cfg[name] = default if default in (None,) or typ in ("int", "float", "str") \
                else TYPES[typ](default)
            continue
        try:
            cfg[name] = TYPES[typ](raw)
        except (ValueError, TypeError) as e:
            raise UsageError(f"parameter {name!r}: {e}") from None
    if cfg["format"] not in ("json", "csv"):
        raise UsageError("format must be json or csv")
    if cfg["threads"] < 1:
        raise UsageError("threads must be >= 1")
    if key == ("count", "asym"):
        Z = cfg["Z"]
        if not Z or any(b <= a for a, b in zip(Z, Z[1:])) or Z[0] < 1:
            raise UsageError("Z grid must be positive and strictly increasing")
    cfg["cache_dir"] = getattr(args, "cache_dir", None) or conf.get("cache_dir")
    return cfg


def canonical_params(key, cfg) -> dict:
    out = {}
    for name, _, _ in COMMANDS[key]:
        v = cfg[name]
        if isinstance(v, forms.BinaryForm):
            v = [str(c) for c in v.coeffs]
        elif isinstance(v, Fraction):
            v = str(v)
        elif isinstance(v, (list, tuple)):
            v = [str(x) if isinstance(x, Fraction) else x for x in v]
        elif isinstance(v, int) and not isinstance(v, bool):
            v = str(v)
        out[name] = v
    return out


# ---------------------------------------------------------------- handlers


def _pairs(sols):
    return [{"p": big(p), "q": big(q)} for p, q in sols]


def h_thue(c):
    F = c["form"]
    r = solve.solve_thue(F, c["m"], c["B"], threads=c["threads"], certified_bound=c["certified_bound"])
    summ = {"op": "thue", "form": _fj(F), "m": big(c["m"]), "degree": F.degree, "box": r.box,
            "count": len(r), "flag": r.flag, "zero_locus": bool(r.extra.get("zero_locus"))}
    return {"solutions": _pairs(r.solutions), "summary": summ}


def h_tm(c):
    F = c["form"]
    r = solve.solve_thue_mahler(F, c["S"], c["B"], threads=c["threads"],
                                certified_bound=c["certified_bound"])
    sols = [{"p": big(p), "q": big(q), "z": list(z)} for p, q, z in r.solutions]
    summ = {"op": "tm", "form": _fj(F), "S": list(c["S"]), "degree": F.degree, "box": r.box,
            "count": len(r), "count_up_to_sign": r.extra["up_to_sign"], "flag": r.flag}
    return {"solutions": sols, "summary": summ}


def h_sunit(c):
    sols = solve.solve_sunit(c["S"], c["E"])
    return {"solutions": [s.to_json() for s in sols],
            "summary": {"op": "sunit", "S": list(c["S"]), "E": c["E"], "count": len(sols),
                        "flag": "box-limited"}}


def h_wsunit(c):
    sols = solve.solve_weighted_sunit(c["a"], c["b"], c["S"], c["E"])
    return {"solutions": [s.to_json() for s in sols],
            "summary": {"op": "wsunit", "a": str(c["a"]), "b": str(c["b"]), "S": list(c["S"]),
                        "E": c["E"], "count": len(sols), "flag": "box-limited"}}


def _fj(F):
    return [big(x) for x in F.coeffs]


def _count_payload(op, c, res):
    d = res.to_json()
    d.update({"op": op, "form": _fj(c["form"])})
    return d


def h_A(c):
    r = count.count_A(c["form"], c["S"], c["Z"], margin=c["margin"], threads=c["threads"], report=True)
    d = _count_payload("A", c, r)
    d["S"] = list(c["S"])
    return d


def h_R(c):
    r = count.count_R(c["form"], c["Z"], margin=c["margin"], threads=c["threads"], report=True)
    return _count_payload("R", c, r)


def h_Rk(c):
    v = count.count_Rk(c["form"], c["k"], c["Z"], margin=c["margin"], threads=c["threads"])
    B0 = count.box_radius(c["form"].degree, c["Z"])
    return {"op": "Rk", "form": _fj(c["form"]), "k": c["k"], "Z": c["Z"], "count": v,
            "box": c["margin"] * B0, "core_box": B0}


def h_Nk(c):
    r = count.count_Nk(c["form"], c["k"], c["Z"], margin=c["margin"], threads=c["threads"], report=True)
    d = _count_payload("Nk", c, r)
    d["k"] = c["k"]
    return d


def h_sigma(c):
    est = count.sigma_archimedean(c["form"], tol=c["tol"], method=c["method"], seed=c["seed"],
                                  samples=c["samples"])
    d = est.to_json()
    d["bean_bound"] = count.bean_bound(c["form"])
    return d


def h_sigmaS(c):
    d = count.sigma_S(c["form"], c["S"], J=c["J"], tol=c["tol"]).to_json()
    d["S"] = list(c["S"])
    return d


def h_lambda(c):
    return count.lambda_k(c["form"], c["k"], c["pmax"]).to_json()


def h_asym(c):
    F = c["form"]
    skey = {"op": "asym-counts", "form": [str(x) for x in F.coeffs], "S": list(c["S"]),
            "k": c["k"], "margin": c["margin"]}
    root = c["_cache_root"]
    known = cache.series_load(root, skey, __version__)
    s = count.asymptotic_report(F, c["S"], c["Z"], k=c["k"], J=c["J"], tol=c["tol"], Pmax=c["pmax"],
                                margin=c["margin"], threads=c["threads"], counts=known)
    new = {Z: {"count": s.counts[i], "box": s.boxes[i], "margin_count": s.margin_counts[i]}
           for i, Z in enumerate(s.Zs)}
    cache.series_store(root, skey, __version__, new)
    return s.to_json()


def h_richest(c):
    rows = count.richest_targets(c["form"], c["M"], top=c["top"], margin=c["margin"],
                                 threads=c["threads"])
    return {"form": _fj(c["form"]), "M": c["M"], "targets": rows}


def h_gpfscan(c):
    return {"form": _fj(c["form"]), "B": c["B"], "shells": count.gpf_scan(c["form"], c["B"])}


def h_tuples(c):
    s = approx.gamma_tuples(c["beta"], c["beta1"], c["t"])
    return {"beta": str(c["beta"]), "beta1": str(c["beta1"]), "t": c["t"], "v": s.v,
            "size": len(s), "expected_size": s.expected_size(), "size_bound_holds": s.size_bound_holds(),
            "tuples": [[int(x) for x in row] for row in s.tuples]}


def h_check(c):
    F = c["form"]
    f = F.dehomogenize()
    places = [approx.INF if p in ("inf", "oo", "infinity") else int(p) for p in c["places"]]
    gammas = c["gammas"] or [Fraction(1, len(places))] * len(places)
    idx = c["roots"] or [0] * len(places)
    if not (len(places) == len(gammas) == len(idx)):
        raise UsageError("places, gammas and roots must have the same length")
    roots = []
    for P, i in zip(places, idx):
        if P == approx.INF:
            rs = approx.RealRoot.all_of(f)
        else:
            rs = list(padic.padic_roots(f, P, c["N"]))
        if not 0 <= i < len(rs):
            raise DomainError(f"place {P}: root index {i} out of range ({len(rs)} roots)")
        roots.append(rs[i])
    system = approx.ApproxSystem(c["k"], c["beta1"], places, roots, gammas)
    d = approx.check_system(system, c["p"], c["q"]).to_json()
    d.update({"p": big(c["p"]), "q": big(c["q"])})
    return d


def h_gap(c):
    thr = approx.gap_threshold(c["k"], c["beta1"], c["h1"])
    d = {"k": str(c["k"]), "beta1": str(c["beta1"]), "h1": big(c["h1"]),
         "threshold": [str(x) for x in thr] if isinstance(thr, tuple) else str(thr)}
    if c["h2"] is not None:
        d["h2"] = big(c["h2"])
        d["holds"] = approx.gap_holds(c["k"], c["beta1"], c["h1"], c["h2"])
    return d


def h_roots(c):
    f = c["form"].dehomogenize()
    rs = padic.padic_roots(f, c["P"], c["N"])
    return {"P": c["P"], "N": c["N"], "complete": rs.complete,
            "roots": [{"residue": big(r.residue), "N": r.N, "simple": r.simple, "pole": r.pole}
                      for r in rs],
            "undecided": [str(u) for u in rs.undecided]}


def h_rho(c):
    return {"form": _fj(c["form"]),
            "rho": [{"m": m, "rho": big(padic.rho(c["form"], m))} for m in c["m"]]}


def h_measure(c):
    lf = padic.local_factor(c["form"], c["P"], c["J"])
    return {"P": lf.P, "J": lf.J, "value": lf.value, "tail_bound": lf.tail_bound,
            "measures": [str(m) for m in lf.measures]}


def h_disc(c):
    return {"form": _fj(c["form"]), "discriminant": big(forms.discriminant(c["form"]))}


def h_factor(c):
    cont, fac = forms.factor_over_Q(c["form"])
    return {"form": _fj(c["form"]), "content": big(cont),
            "factors": [{"coeffs": _fj(G), "multiplicity": e} for G, e in fac]}


def h_normalize(c):
    G, u, v = forms.normalize_nonvanishing(c["form"])
    M = forms.normalizing_map(u, v)
    return {"form": _fj(c["form"]), "G": _fj(G), "u": u, "v": v, "map": [M.a, M.b, M.c, M.d]}


def h_eval(c):
    params = {k: c[k] for k in ("n", "t", "H", "M", "m", "g", "r", "omega_m", "omega_g",
                                "c0", "c1", "c2", "beta1", "eps") if c[k] is not None}
    return bounds.eval_bound(c["name"], **params).to_json()


def default_bound_for(summary: dict):
    op = summary.get("op")
    if op == "tm":
        return "evertse97", {"n": summary["degree"], "t": len(summary["S"])}
    if op == "thue":
        return "evertse97", {"n": summary["degree"], "t": arith.omega(int(summary["m"]))}
    if op in ("sunit", "wsunit"):
        return "evertse84", {"t": len(summary["S"])}
    raise DomainError(f"no default bound for summary op {op!r}")


def h_verify(c):
    summ = c["summary"]
    name, params = default_bound_for(summ)
    if c["name"]:
        name = c["name"]
    spec = bounds.eval_bound(name, **params)
    rep = bounds.verify_counts(int(summ["count"]), spec, "count", {"op": summ.get("op")})
    return rep.to_json()


HANDLERS = {
    ("solve", "thue"): h_thue, ("solve", "tm"): h_tm, ("solve", "sunit"): h_sunit,
    ("solve", "wsunit"): h_wsunit,
    ("count", "A"): h_A, ("count", "R"): h_R, ("count", "Rk"): h_Rk, ("count", "Nk"): h_Nk,
    ("count", "sigma"): h_sigma, ("count", "sigmaS"): h_sigmaS, ("count", "lambda"): h_lambda,
    ("count", "asym"): h_asym, ("count", "richest"): h_richest, ("count", "gpfscan"): h_gpfscan,
    ("approx", "tuples"): h_tuples, ("approx", "check"): h_check, ("approx", "gap"): h_gap,
    ("padic", "roots"): h_roots, ("padic", "rho"): h_rho, ("padic", "measure"): h_measure,
    ("forms", "disc"): h_disc, ("forms", "factor"): h_factor, ("forms", "normalize"): h_normalize,
    ("bounds", "eval"): h_eval, ("bounds", "verify"): h_verify,
}


# ---------------------------------------------------------------- output


def _table(key, payload):
    """(columns, rows) for CSV output, or None for flat key/value records."""
    if key[0] == "solve":
        sols = payload["solutions"]
        if not sols:
            return ["solution"], []
        cols = list(sols[0])
        return cols, [[_cell(s[k]) for k in cols] for s in sols]
    if key == ("count", "asym"):
        d = payload
        rows = [[Z, d["counts"][i], repr(d["normalized"][i][0]), repr(d["normalized"][i][1]),
                 repr(d["reference"]), repr(d["residuals"][i]), d["boxes"][i], d["margin_counts"][i]]
                for i, Z in enumerate(d["Zs"])]
        return ["Z", "count", "ratio_lo", "ratio_hi", "reference", "residual", "box",
                "margin_count"], rows
    if key == ("approx", "tuples"):
        t = payload["t"]
        return [f"a{i}" for i in range(t + 1)], payload["tuples"]
    for k in ("targets", "shells", "roots", "rho"):
        if k in payload and isinstance(payload[k], list):
            rows = payload[k]
            if not rows:
                return [k], []
            cols = list(rows[0])
            return cols, [[_cell(r[c]) for c in cols] for r in rows]
    if key == ("padic", "measure"):
        return ["j", "measure"], [[j, m] for j, m in enumerate(payload["measures"])]
    return None


def _cell(v):
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return v


def render(key, payload, fmt) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        tab = _table(key, payload)
        if tab is None:
            w.writerow(["key", "value"])
            for k in sorted(payload):
                w.writerow([k, _cell(payload[k])])
        else:
            cols, rows = tab
            w.writerow(cols)
            w.writerows(rows)
        return buf.getvalue()
    dump = cache.canonical_json
    if key[0] == "solve":
        lines = [dump(s) for s in payload["solutions"]]
        lines.append(dump(dict(payload["summary"], record="summary")))
        return "\n".join(lines) + "\n"
    return dump(payload) + "\n"


# ---------------------------------------------------------------- entry point


def dispatch(key, cfg, use_cache=True):
    """Run one command; returns (RunRecord, cache_hit)."""
    root = cache.cache_dir(cfg.get("cache_dir")) if use_cache else None
    params = canonical_params(key, cfg)
    if key == ("bounds", "verify"):
        params["summary"] = cfg["summary"]
    ck = {"command": list(key), "params": params, "seed": cfg["seed"]}
    rec = cache.cache_lookup(root, ck, __version__)
    if rec is not None:
        return rec, True
    c = dict(cfg, _cache_root=root)
    payload = HANDLERS[key](c)
    # normalise through JSON so fresh and cached output are byte-identical
    payload = json.loads(cache.canonical_json(payload))
    flags = {}
    if isinstance(payload, dict) and "summary" in payload:
        flags["flag"] = payload["summary"].get("flag")
    rec = cache.RunRecord(cache.config_hash(ck), __version__, ck, payload, flags,
                          datetime.now(timezone.utc).isoformat())
    cache.cache_store(root, rec)
    return rec, False


def _load_summary(path):
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as e:
        raise UsageError(f"summary: {e}") from None
    last = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            d = json.loads(line)
        except ValueError:
            continue
        if isinstance(d, dict) and (d.get("record") == "summary" or "summary" in d):
            last = d.get("summary", d)
    if last is None:
        raise UsageError("summary: no solver summary record found")
    return last


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    key = (args.group, args.cmd)
    try:
        cfg = resolve(args)
        if key == ("bounds", "verify"):
            cfg["summary"] = _load_summary(cfg["summary"])
        t0 = time.perf_counter()
        rec, hit = dispatch(key, cfg, use_cache=not getattr(args, "no_cache", False))
        sys.stdout.write(render(key, rec.payload, cfg["format"]))
        sys.stdout.flush()
        if getattr(args, "timing", False):
            sys.stderr.write(f"wall_time={time.perf_counter() - t0:.3f}s cache_hit={hit}\n")
    except UsageError as e:
        parser.exit(2, f"thuemahler: error: {e}\n")
    except DomainError as e:
        sys.stderr.write(f"thuemahler: domain error: {e}\n")
        return 3
    except Exception as e:  # pragma: no cover - reported, not expected
        log.exception("internal error: %s", e)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
