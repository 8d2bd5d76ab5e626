"""Command-line front end: ``e8galois <subcommand> ...``.

Exit codes: 0 success (or certified), 1 computation failure (or not
certified), 2 usage error. Reports go to stdout as JSON.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import certify as cert
from . import exactpoly as ep
from . import weyl
from .chevalley import default_constants
from .groupelem import GeneratorWord, paper_word, read_word, word_product
from .rootsystem import build_e8_root_system

log = logging.getLogger("e8galois")

SUBCOMMANDS = ("build-poly", "certify", "factor", "disc", "sieve", "weyl", "walk", "dump-roots", "dump-constants")


class UsageError(ValueError):
    pass


@dataclass
class Config:
    command: str
    seed: int = 0
    threads: int = 1
    verbose: int = 0
    options: dict = field(default_factory=dict)

    def validate(self):
        if self.command not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.command!r}")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")


def _prime_list(text: str) -> list[int]:
    try:
        primes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from None
    import sympy

    bad = [p for p in primes if not sympy.isprime(p)]
    if bad or not primes:
        raise argparse.ArgumentTypeError(f"not primes: {bad or text}")
    return primes


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="worker threads for per-prime / per-sample work")
    common.add_argument("-v", "--verbose", action="count", default=0)

    ap = argparse.ArgumentParser(prog="e8galois", description="W(E8) Galois certificates from Ad(g)")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("build-poly", parents=[common], help="char poly of Ad(g), P and Q")
    s.add_argument("--word", default="default", help="'default' or a word file")
    s.add_argument("--out", required=True, help="output file for P")
    s.add_argument("--q-out", help="optional output file for Q with P(T) = T^120 Q(T + 1/T)")

    s = sub.add_parser("certify", parents=[common], help="Galois certificate for a word")
    s.add_argument("--word", default="default")
    s.add_argument("--primes", type=_prime_list, default=[7, 11])
    s.add_argument("--report", help="write the certificate JSON here")
    s.add_argument("--skip-semisimple", action="store_true", help="skip the (M-1)P(M) = 0 check")
    s.add_argument("--modular", action="store_true", help="scan primes mod p without the integer char poly")

    s = sub.add_parser("factor", parents=[common], help="factor-degree pattern mod p")
    s.add_argument("--poly", required=True)
    s.add_argument("--mod", type=_prime_list, required=True)

    s = sub.add_parser("disc", parents=[common], help="exact discriminant")
    s.add_argument("--poly", required=True)
    s.add_argument("--out", help="write the decimal discriminant here")

    s = sub.add_parser("sieve", parents=[common], help="irreducibility sieve over factor degrees")
    s.add_argument("--poly", required=True)
    s.add_argument("--primes", type=_prime_list, default=[7, 11])
    s.add_argument("--scan", action="store_true", help="add primes until the sieve closes")

    s = sub.add_parser("weyl", parents=[common], help="W(E8) order, Coxeter data, class frequencies")
    s.add_argument("--samples", type=int, default=100000)

    s = sub.add_parser("walk", parents=[common], help="pattern frequencies of random walks mod p")
    s.add_argument("--p", type=int, default=101)
    s.add_argument("--steps", type=_int_list, default=[40], help="walk length(s), comma separated")
    s.add_argument("--samples", type=int, default=5000)

    s = sub.add_parser("dump-roots", parents=[common], help="write the 240 roots, doubled coordinates")
    s.add_argument("--out", required=True)

    s = sub.add_parser("dump-constants", parents=[common], help="write the nonzero N(a, b)")
    s.add_argument("--out", required=True)
    return ap


def _load_word(spec: str) -> GeneratorWord:
    return paper_word() if spec == "default" else read_word(spec)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------- commands


def cmd_build_poly(cfg: Config) -> int:
    o = cfg.options
    t0 = time.time()
    word = _load_word(o["word"])
    rep: dict = {}
    g = word_product(word)
    cp = ep.charpoly_exact(g, report=rep, threads=cfg.threads)
    P = ep.strip_unit_eigenvalue(cp, cert.UNIT_MULTIPLICITY)
    ep.write_poly(P, o["out"])
    out = {
        "degree": P.degree,
        "monic": P.is_monic(),
        "palindromic": P.is_palindromic(),
        "P(1)_nonzero": P(1) != 0,
        "sha256": P.sha256(),
        "nnz": g.nnz(),
        "max_abs": g.max_abs(),
        "crt": rep,
    }
    if o.get("q_out"):
        Q = ep.reciprocal_transform(P)
        ep.write_poly(Q, o["q_out"])
        out["q_degree"] = Q.degree
    out["seconds"] = round(time.time() - t0, 2)
    _emit(out)
    return 0


def cmd_certify(cfg: Config) -> int:
    o = cfg.options
    word = _load_word(o["word"])
    if o["modular"]:
        c = cert.certify_word_modular(word)
    else:
        c = cert.certify_w_e8(word, o["primes"], check_semisimple=not o["skip_semisimple"])
    if o.get("report"):
        c.write(o["report"])
    sys.stdout.write(c.to_json())
    return 0 if c.certified else 1


def cmd_factor(cfg: Config) -> int:
    P = ep.read_poly(cfg.options["poly"])
    pats = [ep.factor_degree_pattern(P, p).to_json() for p in cfg.options["mod"]]
    _emit(pats[0] if len(pats) == 1 else pats)
    return 0


def cmd_disc(cfg: Config) -> int:
    P = ep.read_poly(cfg.options["poly"])
    rep: dict = {}
    t0 = time.time()
    D = ep.discriminant_exact(P, report=rep, threads=cfg.threads)
    if cfg.options.get("out"):
        with ep.unlimited_int_digits():
            Path(cfg.options["out"]).write_text(str(D) + "\n")
    _emit({"sign": 1 if D > 0 else (-1 if D < 0 else 0), "digits": ep.decimal_digits(D), "crt": rep,
           "seconds": round(time.time() - t0, 2)})
    return 0


def cmd_sieve(cfg: Config) -> int:
    o = cfg.options
    P = ep.read_poly(o["poly"])
    if o["scan"]:
        _emit(cert.irreducibility_scan(P, tuple(o["primes"])))
        return 0
    pats = [ep.factor_degree_pattern(P, p) for p in o["primes"]]
    sq = [q for q in pats if q.squarefree]
    feasible = ep.factor_degree_sieve(P, sq)
    _emit({
        "primes": [q.prime for q in sq],
        "skipped": [q.prime for q in pats if not q.squarefree],
        "feasible_proper_degrees": sorted(feasible - {0, P.degree}),
        "irreducible": feasible == {0, P.degree},
    })
    return 0


def cmd_weyl(cfg: Config) -> int:
    t0 = time.time()
    chain = weyl.build_group()
    c = weyl.coxeter_element()
    c2 = weyl.perm_power(c, 2)
    n = cfg.options["samples"]
    freq = weyl.class_frequency_experiment(n, cfg.seed, chain) if n > 0 else {}

    def fmt(ct):
        return {str(k): v for k, v in weyl.type_key(ct)}

    _emit({
        "order": chain.order(),
        "orbit_sizes": chain.orbit_sizes,
        "base": chain.base,
        "generator_cycle_types": [fmt(weyl.cycle_type(s)) for s in weyl.simple_reflections()],
        "coxeter_relations": all(weyl.coxeter_relations_hold().values()),
        "coxeter": {"order": weyl.perm_order(c), "cycle_type": fmt(weyl.cycle_type(c)),
                    "square_cycle_type": fmt(weyl.cycle_type(c2)), "square_signature": weyl.signature(c2)},
        "samples": n,
        "targets": {
            "15:16": weyl.binomial_check(freq.get(weyl.type_key(weyl.TYPE_15), 0), n, 1 / 30) if n else None,
            "4:2,8:29": weyl.binomial_check(freq.get(weyl.type_key(weyl.TYPE_4_8), 0), n, 1 / 16) if n else None,
        },
        "frequencies": [{"type": {str(k): v for k, v in key}, "count": cnt}
                        for key, cnt in sorted(freq.items(), key=lambda kv: -kv[1])],
        "seconds": round(time.time() - t0, 2),
    })
    return 0


def cmd_walk(cfg: Config) -> int:
    o = cfg.options
    reports = []
    for k in o["steps"]:
        spec = cert.WalkSpec(p=o["p"], steps=k, samples=o["samples"], seed=cfg.seed)
        reports.append(cert.walk_statistics(spec, threads=cfg.threads))
    _emit(reports[0] if len(reports) == 1 else reports)
    return 0


def cmd_dump_roots(cfg: Config) -> int:
    build_e8_root_system().dump(cfg.options["out"])
    return 0


def cmd_dump_constants(cfg: Config) -> int:
    sc = default_constants()
    rows, cols = np.nonzero(sc.n_table)
    lines = [f"{a} {b} {int(sc.n_table[a, b])}" for a, b in zip(rows.tolist(), cols.tolist())]
    Path(cfg.options["out"]).write_text("\n".join(lines) + "\n")
    return 0


COMMANDS = {
    "build-poly": cmd_build_poly,
    "certify": cmd_certify,
    "factor": cmd_factor,
    "disc": cmd_disc,
    "sieve": cmd_sieve,
    "weyl": cmd_weyl,
    "walk": cmd_walk,
    "dump-roots": cmd_dump_roots,
    "dump-constants": cmd_dump_constants,
}


def parse_config(argv) -> Config:
    ns = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(ns).items() if k not in ("command", "seed", "threads", "verbose")}
    cfg = Config(ns.command, ns.seed, ns.threads, ns.verbose, opts)
    cfg.validate()
    return cfg


def run(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:  # argparse already printed the usage message
        return 0 if exc.code == 0 else 2
    except UsageError as exc:
        sys.stderr.write(f"e8galois: {exc}\n")
        return 2
    logging.basicConfig(level=logging.WARNING - 10 * min(cfg.verbose, 2), format="%(levelname)s %(message)s")
    try:
        return COMMANDS[cfg.command](cfg)
    except (OSError, ValueError, ArithmeticError, RuntimeError) as exc:
        log.error("%s failed: %s", cfg.command, exc)
        sys.stderr.write(f"e8galois {cfg.command}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
