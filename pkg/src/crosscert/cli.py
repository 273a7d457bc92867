"""Command-line front end.

Exit codes: 0 success/feasible, 1 a check failed or the certificate is
infeasible, 2 usage or parameter error.  Every document is JSON with exact
string-encoded numbers; only "float_*" fields carry floats.
"""
import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .certificate import certify, verify_certificate_document
from .errors import CrossCertError
from .exactnum import parse_rational, rational_str
from .families import (default_hyperplane, default_point, hyperplane_family,
                       point_star, primal_check, slackness_check)
from .lattice import Lattice, spectrum_crosscheck, verify_identities, verify_lemmas
from .lattice.subspaces import is_prime
from .search import brute_force_max
from .spectrum import Parameters, multiplicities, theta

SWEEP_QS = (2, 3, 4, 5, 7, 8, 9)


@dataclass
class RunConfig:
    subcommand: str
    q: int = None
    n: int = None
    k: int = None
    l: int = None
    lam: str = "auto"
    output: str = None
    refine_bits: int = 0
    budget: float = 3600.0
    guard: int = None
    extra: dict = field(default_factory=dict)

    def params_dict(self):
        return {"q": self.q, "n": self.n, "k": self.k, "l": self.l}


def _dump(doc, output):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(cfg):
    return Parameters.make(cfg.q, cfg.n, cfg.k, cfg.l)


def cmd_certify(cfg):
    params = _params(cfg)
    lam = None if cfg.lam in (None, "auto") else parse_rational(cfg.lam)
    cert = certify(params, lam=lam, refine_bits=cfg.refine_bits,
                   with_structure=cfg.extra.get("structure", False))
    doc = cert.to_json()
    ok, reasons = verify_certificate_document(doc)
    doc["self_check"] = {"ok": ok, "reasons": reasons}
    return doc, 0 if cert.feasible and ok else 1


def cmd_check_identities(cfg):
    lattice = Lattice(cfg.n, cfg.q, guard=cfg.guard)
    ident = verify_identities(lattice, kmax=cfg.extra.get("kmax"))
    lem = verify_lemmas(lattice)
    doc = {"q": cfg.q, "n": cfg.n, "identities": ident, "lemmas": lem,
           "ok": ident["ok"] and lem["ok"]}
    return doc, 0 if doc["ok"] else 1


def cmd_spectrum(cfg):
    l = cfg.l if cfg.l is not None else cfg.k
    params = Parameters.make(cfg.q, cfg.n, cfg.k, l)
    mult = multiplicities(params)
    rows = []
    for i in range(params.k + 1):
        row = {"i": i, "theta_kk": theta(params, i, params.k, params.k).to_json()}
        if i <= params.l:
            row["theta_kl"] = theta(params, i, params.k, params.l).to_json()
            row["theta_ll"] = theta(params, i, params.l, params.l).to_json()
        rows.append(row)
    doc = {
        "params": params.as_dict(),
        "q_prime_power": params.q_prime_power,
        "multiplicities": {str(i): str(d) for i, d in mult.d.items()},
        "thetas": rows,
        "crosscheck": None,
    }
    ok = True
    if is_prime(params.q):
        try:
            lattice = Lattice(params.n, params.q, guard=cfg.guard)
        except CrossCertError as exc:
            doc["crosscheck_skipped"] = str(exc)
        else:
            checks = [spectrum_crosscheck(lattice, d) for d in sorted({params.k, params.l})]
            doc["crosscheck"] = checks
            ok = all(c["ok"] for c in checks)
    else:
        doc["crosscheck_skipped"] = "q is not prime"
    doc["ok"] = ok
    return doc, 0 if ok else 1


def cmd_extremal(cfg):
    params = _params(cfg)
    lattice = Lattice(params.n, params.q, guard=cfg.guard)
    cert = certify(params)
    cases = []
    z = default_point(lattice)
    pairs = [("point_star", point_star(lattice, z, params.k), point_star(lattice, z, params.l))]
    if params.n == 2 * params.k == 2 * params.l:
        H = hyperplane_family(lattice, default_hyperplane(lattice), params.k)
        pairs.append(("hyperplane", H, H))
    for name, F, G in pairs:
        primal = primal_check(lattice, F, G, cert.D)
        slack = slackness_check(lattice, F, G, cert)
        cases.append({"type": name, "F": F.to_json(lattice), "G": G.to_json(lattice),
                      "product": str(len(F) * len(G)), "primal": primal,
                      "slackness": slack, "ok": primal["ok"] and slack["ok"]
                      and primal["equality"]})
    doc = {"params": params.as_dict(), "bound": str(cert.D),
           "lambda": rational_str(cert.coefficients.lam), "cases": cases,
           "ok": all(c["ok"] for c in cases)}
    return doc, 0 if doc["ok"] else 1


def cmd_search(cfg):
    params = _params(cfg)
    lattice = Lattice(params.n, params.q, guard=cfg.guard)
    res = brute_force_max(lattice, params.k, params.l, budget=cfg.budget)
    bound = params.gauss(params.n - 1, params.k - 1) * params.gauss(params.n - 1, params.l - 1)
    doc = {"params": params.as_dict(), "bound": str(bound), **res.to_json(lattice),
           "within_bound": res.best_product <= bound}
    return doc, 0 if doc["within_bound"] else 1


def _sweep_point(args):
    q, n, k, l, structure = args
    cert = certify(Parameters.make(q, n, k, l), with_structure=structure)
    out = {"params": {"q": q, "n": n, "k": k, "l": l}, "verdict": cert.verdict,
           "bound": str(cert.bound), "lambda": rational_str(cert.coefficients.lam)}
    if structure:
        out["structure_ok"] = cert.structure["ok"]
    return out


def sweep_grid(qs=SWEEP_QS, n_min=2, n_max=14):
    for q in qs:
        for n in range(n_min, n_max + 1):
            for k in range(1, n // 2 + 1):
                for l in range(1, k + 1):
                    yield q, n, k, l


def cmd_sweep(cfg):
    qs = cfg.extra.get("qs") or SWEEP_QS
    structure = cfg.extra.get("structure", False)
    grid = [(q, n, k, l, structure) for q, n, k, l in
            sweep_grid(qs, cfg.extra.get("n_min", 2), cfg.extra.get("n_max", 14))]
    workers = cfg.extra.get("workers", 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(_sweep_point, grid, chunksize=8))
    else:
        points = [_sweep_point(g) for g in grid]
    ok = all(p["verdict"] == "feasible" and p.get("structure_ok", True) for p in points)
    doc = {"count": len(points), "all_feasible": ok, "points": points}
    return doc, 0 if ok else 1


COMMANDS = {
    "certify": cmd_certify,
    "check-identities": cmd_check_identities,
    "spectrum": cmd_spectrum,
    "extremal": cmd_extremal,
    "search": cmd_search,
    "sweep": cmd_sweep,
}


def run(cfg):
    """Dispatch one subcommand; returns (document, exit_code)."""
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except CrossCertError as exc:
        return {"error": str(exc), "kind": type(exc).__name__,
                "params": cfg.params_dict()}, 2


def _int_list(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def build_parser():
    parser = argparse.ArgumentParser(prog="crosscert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, need_kl=True):
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=need_kl)
        p.add_argument("--l", type=int, required=need_kl)
        p.add_argument("--output", "-o", default=None, help="write JSON here instead of stdout")
        p.add_argument("--guard", type=int, default=None,
                       help="max dense matrix entries (default: $CROSSCERT_MAX_ENTRIES or 5e7)")

    p = sub.add_parser("certify", help="build and check the dual certificate")
    common(p)
    p.add_argument("--lambda", dest="lam", default="auto", help='"auto" or a rational "p/r"')
    p.add_argument("--refine-bits", type=int, default=0)
    p.add_argument("--structure", action="store_true", help="include structure checks")

    p = sub.add_parser("check-identities", help="verify incidence identities and lemmas")
    common(p, need_kl=False)
    p.add_argument("--kmax", type=int, default=None)

    p = sub.add_parser("spectrum", help="theta tables and dense eigenvalue cross-check")
    common(p, need_kl=False)

    p = sub.add_parser("extremal", help="extremal families with primal and slackness checks")
    common(p)

    p = sub.add_parser("search", help="branch-and-bound maximum of |F||G|")
    common(p)
    p.add_argument("--budget", type=float, default=3600.0, help="seconds")

    p = sub.add_parser("sweep", help="certify over a parameter grid")
    p.add_argument("--qs", type=_int_list, default=SWEEP_QS)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=14)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--structure", action="store_true")
    p.add_argument("--output", "-o", default=None)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.subcommand == "spectrum" and args.k is None:
        build_parser().error("spectrum needs --k")
    extra = {}
    for name in ("structure", "kmax", "qs", "n_min", "n_max", "workers"):
        if hasattr(args, name):
            extra[name] = getattr(args, name)
    cfg = RunConfig(
        subcommand=args.subcommand,
        q=getattr(args, "q", None), n=getattr(args, "n", None),
        k=getattr(args, "k", None), l=getattr(args, "l", None),
        lam=getattr(args, "lam", "auto"), output=args.output,
        refine_bits=getattr(args, "refine_bits", 0),
        budget=getattr(args, "budget", 3600.0), guard=getattr(args, "guard", None),
        extra=extra)
    doc, code = run(cfg)
    _dump(doc, cfg.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
