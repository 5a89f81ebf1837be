"""Command-line front end.

    slaterint run JOB.json [--tol T] [--mu-max M] [--oracle] [--oracle-tol X] [--json] [--quiet]
    slaterint oracle JOB.json [--mu-max M] [--json]
    slaterint eta MU SIGMA G BETA [--json]
    slaterint xi MU SIGMA R1 R2 ALPHA1 ALPHA2 [--oracle] [--json]
    slaterint graphs labels N | count N M | graphical D1,D2,... |
                     components N EDGES | asymptotic N  [--json]

Exit codes: 0 success, 2 usage or schema error, 3 no convergence,
4 oracle disagreement beyond ``--oracle-tol``.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_CONVERGENCE = 3
EXIT_ORACLE = 4

JOB_FIELDS = {"R", "kind", "orbitals", "tol", "muMax", "oracle"}
ORBITAL_FIELDS = {"n", "l", "m", "delta", "center"}


class SchemaError(ValueError):
    pass


def _apply_thread_cap() -> None:
    # must run before numpy loads its BLAS
    raw = os.environ.get("NUM_THREADS")
    if raw is None:
        return
    try:
        n = int(raw)
        if n < 1:
            raise ValueError
    except ValueError:
        raise SchemaError(f"NUM_THREADS must be a positive integer, got {raw!r}")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, str(n))


# ------------------------------------------------------------------ output


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return "null"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            return json.dumps(str(x))
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_fmt(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dumps(record) -> str:
    """JSON with every float written to 17 significant digits."""
    return _fmt(record)


def _emit(args, record: dict, lines: list) -> None:
    if args.json:
        print(dumps(record))
    elif not getattr(args, "quiet", False):
        for line in lines:
            print(line)


# -------------------------------------------------------------------- jobs


@dataclass
class JobSpec:
    R: float
    kind: str
    orbitals: list
    tol: float = 1e-10
    muMax: int = 40
    oracle: bool = False
    source: str = field(default="<job>", compare=False)


def _need(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise SchemaError(f"{where}: missing field '{key}'")
    val = obj[key]
    if kind is float and isinstance(val, int) and not isinstance(val, bool):
        val = float(val)
    if kind is int and isinstance(val, bool) or not isinstance(val, kind):
        raise SchemaError(f"{where}: field '{key}' must be {kind.__name__}, got {val!r}")
    return val


def parse_job(text: str, source: str = "<job>") -> JobSpec:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}")
    if not isinstance(raw, dict):
        raise SchemaError(f"{source}: top level must be an object")
    unknown = set(raw) - JOB_FIELDS
    if unknown:
        raise SchemaError(f"{source}: unknown field(s) {sorted(unknown)}")
    R = _need(raw, "R", float, source)
    kind = _need(raw, "kind", str, source)
    if kind not in ("exchange", "hybrid", "coulomb"):
        raise SchemaError(f"{source}: field 'kind' must be exchange|hybrid|coulomb, got {kind!r}")
    orbs = _need(raw, "orbitals", list, source)
    if len(orbs) != 4:
        raise SchemaError(f"{source}: field 'orbitals' needs exactly 4 entries, got {len(orbs)}")
    parsed = []
    for k, o in enumerate(orbs):
        where = f"{source}: orbitals[{k}]"
        if not isinstance(o, dict):
            raise SchemaError(f"{where}: must be an object")
        unknown = set(o) - ORBITAL_FIELDS
        if unknown:
            raise SchemaError(f"{where}: unknown field(s) {sorted(unknown)}")
        parsed.append({"n": _need(o, "n", int, where), "l": _need(o, "l", int, where),
                       "m": _need(o, "m", int, where), "delta": _need(o, "delta", float, where),
                       "center": _need(o, "center", str, where)})
    job = JobSpec(R, kind, parsed, source=source)
    if "tol" in raw:
        job.tol = _need(raw, "tol", float, source)
    if "muMax" in raw:
        job.muMax = _need(raw, "muMax", int, source)
    if "oracle" in raw:
        job.oracle = _need(raw, "oracle", bool, source)
    return job


def build_orbitals(job: JobSpec) -> list:
    from .engine import IntegralKind, _check_job
    from .orbital import SlaterOrbital

    orbs = []
    for k, o in enumerate(job.orbitals):
        try:
            orb = SlaterOrbital(o["n"], o["l"], o["m"], o["delta"], o["center"])
            orb.check_supported()
        except ValueError as exc:
            raise SchemaError(f"{job.source}: orbitals[{k}]: {exc}")
        orbs.append(orb)
    try:
        _check_job(orbs, IntegralKind(job.kind), job.R)
    except ValueError as exc:
        raise SchemaError(f"{job.source}: {exc}")
    return orbs


def _load(path: str) -> JobSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror}")
    return parse_job(text, path)


def cmd_run(args) -> int:
    from .engine import ConvergenceError, integral
    from .oracle import integral_oracle

    job = _load(args.job)
    if args.tol is not None:
        job.tol = args.tol
    if args.mu_max is not None:
        job.muMax = args.mu_max
    if args.oracle:
        job.oracle = True
    if not (job.tol > 0 and job.muMax >= 0 and job.R > 0):
        raise SchemaError(f"{job.source}: need tol > 0, muMax >= 0, R > 0")
    orbs = build_orbitals(job)
    record = {"kind": job.kind, "R": job.R,
              "orbitals": [o.label for o in orbs], "tol": job.tol, "muMax": job.muMax}
    code = EXIT_OK
    try:
        res = integral(orbs, job.kind, job.R, tol=job.tol, mu_max=job.muMax)
        record["status"] = "converged"
    except ConvergenceError as exc:
        res = exc.partial
        record["status"] = "not_converged"
        code = EXIT_CONVERGENCE
    record.update(value=res.value, muUsed=res.mu_used, tailEstimate=res.tail_estimate,
                  termCount=res.term_count, muTerms=list(res.mu_terms))
    lines = [f"{job.kind} {' '.join(record['orbitals'])}  R={job.R:g}",
             f"value        {res.value:.15e}",
             f"muUsed       {res.mu_used}",
             f"tailEstimate {res.tail_estimate:.3e}",
             f"termCount    {res.term_count}",
             f"elapsed      {res.elapsed:.4f} s"]
    if code == EXIT_CONVERGENCE:
        lines.append(f"NOT CONVERGED at muMax={job.muMax}")
    if job.oracle and code == EXIT_OK:
        o = integral_oracle(orbs, job.kind, job.R, max(res.mu_used, 0))
        rel = abs(res.value - o.value) / abs(o.value) if o.value else abs(res.value)
        record["oracle"] = {"value": o.value, "relDiff": rel, "errorEstimate": o.error_estimate,
                            "tolerance": args.oracle_tol}
        lines += [f"oracle       {o.value:.15e}", f"relDiff      {rel:.3e}"]
        if rel > args.oracle_tol:
            code = EXIT_ORACLE
            lines.append(f"ORACLE DISAGREEMENT beyond {args.oracle_tol:g}")
    _emit(args, record, lines)
    return code


def cmd_oracle(args) -> int:
    from .oracle import integral_oracle

    job = _load(args.job)
    mu_max = args.mu_max if args.mu_max is not None else job.muMax
    orbs = build_orbitals(job)
    o = integral_oracle(orbs, job.kind, job.R, mu_max)
    record = {"kind": job.kind, "R": job.R, "muMax": mu_max, "value": o.value,
              "errorEstimate": o.error_estimate, "muTerms": list(o.mu_terms)}
    _emit(args, record, [f"oracle value  {o.value:.15e}", f"muMax         {mu_max}",
                         f"errorEstimate {o.error_estimate:.3e}"])
    return EXIT_OK


def cmd_eta(args) -> int:
    from .eta import eta_ascending, eta_beta_zero, eta_descending, eta_integral
    from .oracle import eta_oracle

    mu, sigma, g, beta = args.mu, abs(args.sigma), args.g, args.beta
    if not 0 <= sigma <= mu or g < 0:
        raise SchemaError("need 0 <= |sigma| <= mu and g >= 0")
    record = {"mu": mu, "sigma": sigma, "g": g, "beta": beta, "value": eta_integral(mu, sigma, g, beta)}
    if beta != 0.0:
        record["ascending"] = eta_ascending(mu, sigma, g, beta)
        record["descending"] = eta_descending(mu, sigma, g, beta)
    else:
        record["betaZero"] = eta_beta_zero(mu, sigma, g)
    record["quadrature"] = eta_oracle(mu, sigma, g, beta)
    lines = [f"{k:<11} {v:.15e}" for k, v in record.items() if isinstance(v, float) and k != "beta"]
    _emit(args, record, lines)
    return EXIT_OK


def cmd_xi(args) -> int:
    from .oracle import xi_oracle
    from .xi import xi_double_integral

    if not 0 <= abs(args.sigma) <= args.mu or args.r1 < 0 or args.r2 < 0:
        raise SchemaError("need 0 <= |sigma| <= mu and r1, r2 >= 0")
    if not (args.alpha1 > 0 and args.alpha2 > 0):
        raise SchemaError("alphas must be positive")
    params = (args.mu, abs(args.sigma), args.r1, args.r2, args.alpha1, args.alpha2)
    value = xi_double_integral(*params)
    record = {"mu": params[0], "sigma": params[1], "r1": params[2], "r2": params[3],
              "alpha1": params[4], "alpha2": params[5], "value": value}
    lines = [f"closed form {value:.15e}"]
    if args.oracle:
        q = xi_oracle(*params)
        rel = abs(value - q) / abs(q) if q else abs(value)
        record.update(quadrature=q, relDiff=rel)
        lines += [f"quadrature  {q:.15e}", f"relDiff     {rel:.3e}"]
    _emit(args, record, lines)
    return EXIT_OK


def _parse_edges(text: str) -> list:
    edges = []
    for part in filter(None, text.replace(" ", "").split(",")):
        try:
            i, j = part.split("-")
            edges.append((int(i), int(j)))
        except ValueError:
            raise SchemaError(f"bad edge {part!r}; expected i-j")
    return edges


def cmd_graphs(args) -> int:
    from . import graphs as G

    try:
        if args.verb == "labels":
            v = G.nm_label_count(args.n)
            _emit(args, {"n": args.n, "labels": v}, [str(v)])
        elif args.verb == "count":
            reps = G.enumerate_connected(args.n, args.m)
            record = {"n": args.n, "m": args.m, "count": len(reps),
                      "graphs": [sorted(g.edges) for g in reps]}
            _emit(args, record, [str(len(reps))])
        elif args.verb == "graphical":
            try:
                degs = [int(x) for x in args.degrees.split(",") if x]
            except ValueError:
                raise SchemaError(f"bad degree list {args.degrees!r}")
            v = G.is_graphical(degs)
            _emit(args, {"degrees": degs, "graphical": v}, [str(v).lower()])
        elif args.verb == "components":
            g = G.SimpleGraph(args.n, _parse_edges(args.edges))
            parts = G.connected_components(g)
            _emit(args, {"n": args.n, "components": parts},
                  [" ".join("{" + ",".join(map(str, p)) + "}" for p in parts)])
        elif args.verb == "asymptotic":
            c = G.labeled_connected_count(args.n)
            total = 2 ** (args.n * (args.n - 1) // 2)
            ratio = c / total
            _emit(args, {"n": args.n, "labeledConnected": c, "allLabeled": total, "ratio": ratio},
                  [f"labeled connected {c}", f"all labeled       {total}", f"ratio             {ratio:.12f}"])
    except ValueError as exc:
        raise SchemaError(str(exc))
    return EXIT_OK


# ------------------------------------------------------------------ parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_SCHEMA)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--quiet", action="store_true", help="suppress human-readable output")

    p = _Parser(prog="slaterint", description="Two-center Slater-orbital repulsion integrals.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", parents=[common], help="evaluate a job file")
    r.add_argument("job")
    r.add_argument("--tol", type=float)
    r.add_argument("--mu-max", type=int)
    r.add_argument("--oracle", action="store_true", help="compare against quadrature")
    r.add_argument("--oracle-tol", type=float, default=1e-6)
    r.set_defaults(func=cmd_run)

    o = sub.add_parser("oracle", parents=[common], help="quadrature-only evaluation of a job")
    o.add_argument("job")
    o.add_argument("--mu-max", type=int)
    o.set_defaults(func=cmd_oracle)

    e = sub.add_parser("eta", parents=[common], help="eta integral in every representation")
    e.add_argument("mu", type=int)
    e.add_argument("sigma", type=int)
    e.add_argument("g", type=int)
    e.add_argument("beta", type=float)
    e.set_defaults(func=cmd_eta)

    x = sub.add_parser("xi", parents=[common], help="xi double integral")
    for name in ("mu", "sigma", "r1", "r2"):
        x.add_argument(name, type=int)
    x.add_argument("alpha1", type=float)
    x.add_argument("alpha2", type=float)
    x.add_argument("--oracle", action="store_true")
    x.set_defaults(func=cmd_xi)

    g = sub.add_parser("graphs", help="correlation-graph combinatorics")
    gs = g.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    a = gs.add_parser("labels", parents=[common])
    a.add_argument("n", type=int)
    a = gs.add_parser("count", parents=[common])
    a.add_argument("n", type=int)
    a.add_argument("m", type=int)
    a = gs.add_parser("graphical", parents=[common])
    a.add_argument("degrees", help="comma-separated degrees, e.g. 3,3,1,1")
    a = gs.add_parser("components", parents=[common])
    a.add_argument("n", type=int)
    a.add_argument("edges", nargs="?", default="", help="comma-separated i-j pairs, e.g. 1-2,2-3")
    a = gs.add_parser("asymptotic", parents=[common])
    a.add_argument("n", type=int)
    g.set_defaults(func=cmd_graphs)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_thread_cap()
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
