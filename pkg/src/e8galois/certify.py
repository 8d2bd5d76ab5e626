"""Galois-group certificates for Ad-characteristic polynomials, plus walk statistics.

A certificate records the mod-p factor-degree patterns of P and the chain of
deductions that pins the Galois group of P to W(E8). Two facts about W(E8)
are imported rather than recomputed and are listed as axioms.
"""

from __future__ import annotations

import json
import math
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import sympy

from . import _kernels
from . import exactpoly as ep
from .chevalley import DIM, default_constants
from .groupelem import GeneratorWord, _step_operator, paper_word, word_product
from .rootsystem import NPOS, NROOTS, RANK
from .weyl import TYPE_4_8, TYPE_15, signature_of_type, type_key

CERT_VERSION = 1
UNIT_MULTIPLICITY = RANK

CERTIFIED = "W(E8)-certified"
INCONCLUSIVE = "inconclusive"

AXIOM_CLASS_UNIQUENESS = (
    "W(E8) has a unique conjugacy class with cycle type {4:2, 8:29} on the roots "
    "and a unique one with cycle type {15:16} (the class of c^2 for a Coxeter element c)"
)
AXIOM_MAXIMAL_SUBGROUPS = (
    "every proper subgroup of W(E8) containing a conjugate of c^b, with b coprime to 15, "
    "lies in the kernel of the signature on the roots"
)
AXIOM_CITATIONS = {
    AXIOM_CLASS_UNIQUENESS: "regular elements of Weyl groups (Springer); class table of W(E8)",
    AXIOM_MAXIMAL_SUBGROUPS: "maximal subgroups of W(E8), computer-algebra inspection",
}


@dataclass(frozen=True)
class Deduction:
    statement: str
    basis: str  # "computed" or "axiom"
    citation: str = ""


@dataclass
class Certificate:
    version: int
    word: list
    poly_sha: str | None
    primes: list
    deductions: list
    assumptions: list
    conclusion: str
    reason: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def from_json(cls, text: str) -> Certificate:
        d = json.loads(text)
        d["deductions"] = [Deduction(**x) for x in d["deductions"]]
        return cls(**d)

    @property
    def certified(self) -> bool:
        return self.conclusion == CERTIFIED

    def validate(self) -> bool:
        """Soundness gate: recheck a certified conclusion from the recorded data alone."""
        if not self.certified:
            return True
        pats = self.primes
        has_sqfree = any(p["squarefree"] for p in pats)
        degs = [type_key({int(k): v for k, v in p["degrees"].items()}) for p in pats if p["squarefree"]]
        has_odd = any(signature_of_type(dict(d)) == -1 and sum(a * b for a, b in d) == NROOTS for d in degs)
        has_15 = type_key(TYPE_15) in degs
        axioms = [d for d in self.deductions if isinstance(d, Deduction) and d.basis == "axiom"]
        return has_sqfree and has_odd and has_15 and len(axioms) == 2


def _pattern_json(pat: ep.FactorPattern) -> dict:
    return pat.to_json()


def polynomial_of_word(word: GeneratorWord, report: dict | None = None):
    """(char poly of Ad(word), P) with P = char poly / (T-1)**8, or raises."""
    g = word_product(word)
    cp = ep.charpoly_exact(g, report=report)
    return g, cp, ep.strip_unit_eigenvalue(cp, UNIT_MULTIPLICITY)


def certify_polynomial(
    P: ep.IntPoly,
    primes=(7, 11),
    word: GeneratorWord | None = None,
    matrix=None,
    check_semisimple: bool = True,
) -> Certificate:
    """Run the deduction on a given P (degree 240, P(1) != 0)."""
    word_json = word.to_json() if word is not None else []
    deds: list[Deduction] = []
    pats = []
    if P.degree != NROOTS or P(1) == 0:
        return Certificate(CERT_VERSION, word_json, P.sha256(), [], [], [], INCONCLUSIVE, "element not regular at 1")
    deds.append(Deduction(f"det(T - Ad(g)) = (T-1)^{UNIT_MULTIPLICITY} P(T), deg P = 240, P(1) != 0", "computed"))
    for p in primes:
        if P.lc % p == 0:
            continue
        pat = ep.factor_degree_pattern(P, p)
        pats.append(pat)
    sq = [q for q in pats if q.squarefree]
    odd = [q for q in sq if signature_of_type(q.as_dict()) == -1]
    has_15 = [q for q in sq if q.as_dict() == TYPE_15]
    if sq:
        deds.append(Deduction(f"P is squarefree mod {sq[0].prime}, hence separable over Q", "computed"))
    if check_semisimple and matrix is not None and sq:
        ok = ep.annihilation_check(matrix, P)
        deds.append(
            Deduction(
                "(Ad(g) - 1) P(Ad(g)) = 0, so Ad(g) is semisimple with minimal polynomial (T-1)P"
                if ok
                else "(Ad(g) - 1) P(Ad(g)) != 0",
                "computed",
            )
        )
        if not ok:
            return Certificate(
                CERT_VERSION, word_json, P.sha256(), [_pattern_json(q) for q in pats], deds, [], INCONCLUSIVE,
                "annihilation check failed",
            )
    for q in odd:
        ct = ", ".join(f"{d}:{c}" for d, c in q.degrees)
        deds.append(Deduction(f"Frobenius at {q.prime} has cycle type {{{ct}}} on the roots, signature -1", "computed"))
        break
    for q in has_15:
        deds.append(Deduction(f"Frobenius at {q.prime} has cycle type {{15:16}}, the type of c^2", "computed"))
        break
    assumptions = [AXIOM_CLASS_UNIQUENESS, AXIOM_MAXIMAL_SUBGROUPS]
    if sq and odd and has_15:
        deds.append(Deduction(AXIOM_CLASS_UNIQUENESS, "axiom", AXIOM_CITATIONS[AXIOM_CLASS_UNIQUENESS]))
        deds.append(Deduction(AXIOM_MAXIMAL_SUBGROUPS, "axiom", AXIOM_CITATIONS[AXIOM_MAXIMAL_SUBGROUPS]))
        deds.append(
            Deduction(
                "G contains a conjugate of c^2 and an odd element, so G is not in any proper subgroup: G = W(E8)",
                "computed",
            )
        )
        conclusion, reason = CERTIFIED, ""
    else:
        missing = [n for n, ok in (("squarefree", sq), ("odd signature", odd), ("{15:16}", has_15)) if not ok]
        conclusion, reason = INCONCLUSIVE, "missing pattern: " + ", ".join(missing)
    return Certificate(
        CERT_VERSION, word_json, P.sha256(), [_pattern_json(q) for q in pats], deds, assumptions, conclusion, reason
    )


def certify_w_e8(word: GeneratorWord | None = None, primes=(7, 11), check_semisimple: bool = True) -> Certificate:
    word = word or paper_word()
    try:
        g, cp, P = polynomial_of_word(word)
    except ep.NotDivisibleError as exc:
        return Certificate(CERT_VERSION, word.to_json(), None, [], [], [], INCONCLUSIVE, f"element not regular at 1: {exc}")
    return certify_polynomial(P, primes, word, g, check_semisimple)


def prime_scan(P: ep.IntPoly, budget: int = 20, start: int = 3) -> dict:
    """Scan primes upward until both witness patterns appear or the budget runs out."""
    found: dict[str, int | None] = {"15:16": None, "odd": None}
    scanned = []
    p = start - 1
    while len(scanned) < budget and None in found.values():
        p = sympy.nextprime(p)
        if P.lc % p == 0:
            continue
        pat = ep.factor_degree_pattern(P, p)
        scanned.append(pat.to_json())
        if not pat.squarefree:
            continue
        if found["15:16"] is None and pat.as_dict() == TYPE_15:
            found["15:16"] = p
        if found["odd"] is None and signature_of_type(pat.as_dict()) == -1:
            found["odd"] = p
    return {"found": found, "scanned": scanned, "complete": None not in found.values()}


def irreducibility_scan(P: ep.IntPoly, first=(7, 11), max_prime: int = 1000) -> dict:
    """Add primes after ``first`` until the degree sieve proves P irreducible."""
    pats = [ep.factor_degree_pattern(P, p) for p in first]
    pats = [q for q in pats if q.squarefree]
    history = [{"p": q.prime, "feasible": sorted(ep.factor_degree_sieve(P, pats[: i + 1]))} for i, q in enumerate(pats)]
    p = max(first)
    while not ep.is_irreducible_by_sieve(P, pats) and p < max_prime:
        p = sympy.nextprime(p)
        pat = ep.factor_degree_pattern(P, p)
        if not pat.squarefree:
            continue
        pats.append(pat)
        history.append({"p": p, "feasible": sorted(ep.factor_degree_sieve(P, pats))})
    return {
        "primes": [q.prime for q in pats],
        "history": history,
        "irreducible": ep.is_irreducible_by_sieve(P, pats),
    }


def reproduce_theorem1(out_dir=None, check_semisimple: bool = True) -> dict:
    """End to end on the 16-letter word: P, Q and a certificate."""
    stage = "build"
    try:
        word = paper_word()
        rep: dict = {}
        g, cp, P = polynomial_of_word(word, rep)
        stage = "reciprocal"
        Q = ep.reciprocal_transform(P)
        stage = "certify"
        cert = certify_polynomial(P, (7, 11), word, g, check_semisimple)
    except Exception as exc:
        raise RuntimeError(f"stage {stage} failed: {exc}") from exc
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        ep.write_poly(P, out / "P.txt")
        ep.write_poly(Q, out / "Q.txt")
        cert.write(out / "certificate.json")
    return {"P": P, "Q": Q, "certificate": cert, "charpoly_report": rep}


# ---------------------------------------------------------------- walks


@dataclass(frozen=True)
class WalkSpec:
    p: int = 101
    steps: int = 40
    samples: int = 5000
    seed: int = 0

    def __post_init__(self):
        if self.steps < 0 or self.samples < 1 or not sympy.isprime(self.p):
            raise ValueError("need steps >= 0, samples >= 1 and p prime")


def walk_letters() -> list[tuple[int, int]]:
    """The 16 letters x_{+-alpha_i}(1) and their inverses."""
    base = [(i, 1) for i in range(RANK)] + [(NPOS + i, 1) for i in range(RANK)]
    return base + [(r, -1) for r, _ in base]


def strip_unit_mod(f: np.ndarray, p: int) -> tuple[np.ndarray, int]:
    """Divide out the largest power of (T-1) mod p."""
    one = np.array([p - 1, 1], dtype=np.int64)
    k = 0
    while f.shape[0] > 1:
        q, r = _kernels.poly_divmod(f, one, p)
        if r.shape[0]:
            break
        f, k = q, k + 1
    return f, k


def walk_sample(letter_ids, p: int, letters, sc=None):
    """Pattern of the char poly (unit part removed) of a walk product mod p."""
    sc = sc or default_constants()
    m = np.eye(DIM, dtype=np.int64)
    for t in letter_ids:
        alpha, u = letters[t]
        _, rows, cols, vals, _ = _step_operator(sc, alpha, u % p, p)
        m = (m + _kernels.right_mul_sparse_mod(m, rows, cols, vals, p)) % p
    cp = _kernels.hessenberg_charpoly(m, p)
    f, k = strip_unit_mod(cp, p)
    if f.shape[0] == 1:
        return k, None
    return k, ep.pattern_of_residues(f, p)


def walk_statistics(spec: WalkSpec, tol_sigma: float = 3.0, tol_rel: float = 0.30, threads: int = 1) -> dict:
    """Frequencies of the two witness patterns along seeded random walks mod p."""
    letters = walk_letters()
    rng = np.random.default_rng(spec.seed)
    tally: Counter = Counter()
    degenerate = 0
    non_sqfree = 0
    unit_mult: Counter = Counter()
    t0 = time.time()
    # all walks are drawn up front so the result does not depend on threads
    walks = rng.integers(0, len(letters), size=(spec.samples, spec.steps))
    sc = default_constants()
    results = ep.ordered_map(lambda ids: walk_sample(ids, spec.p, letters, sc), walks, threads)
    for k, pat in results:
        unit_mult[k] += 1
        if pat is None:
            degenerate += 1
        elif not pat.squarefree:
            non_sqfree += 1
        else:
            tally[pat.degrees] += 1
    n = spec.samples
    report = {
        "spec": asdict(spec),
        "degenerate": degenerate,
        "non_squarefree": non_sqfree,
        "unit_multiplicity": {str(k): v for k, v in sorted(unit_mult.items())},
        "seconds": round(time.time() - t0, 2),
        "tolerance": {"sigma": tol_sigma, "relative": tol_rel},
        "targets": {},
    }
    for name, ct, target in (("15:16", TYPE_15, 1 / 30), ("4:2,8:29", TYPE_4_8, 1 / 16)):
        c = tally.get(type_key(ct), 0)
        freq = c / n
        sigma = math.sqrt(target * (1 - target) / n)
        allowance = tol_sigma * sigma + tol_rel * target
        report["targets"][name] = {
            "count": c,
            "freq": freq,
            "target": target,
            "sigma": sigma,
            "ci95": [freq - 1.96 * math.sqrt(freq * (1 - freq) / n), freq + 1.96 * math.sqrt(freq * (1 - freq) / n)],
            "allowance": allowance,
            "ok": abs(freq - target) <= allowance,
        }
    report["top_patterns"] = [
        {"degrees": {str(d): c for d, c in k}, "count": v} for k, v in tally.most_common(10)
    ]
    return report


# ---------------------------------------------------------------- random words


def random_word(length: int, rng: np.random.Generator) -> GeneratorWord:
    """A walk word over the 32 letters x_{+-alpha_i}(+-1)."""
    letters = walk_letters()
    ids = rng.integers(0, len(letters), size=length)
    return GeneratorWord(tuple(letters[i] for i in ids))


def random_integer_word(length: int, rng: np.random.Generator, max_u: int = 2) -> GeneratorWord:
    """Letters x_alpha(u) with alpha uniform over all roots and 0 < |u| <= max_u."""
    roots = rng.integers(0, NROOTS, size=length)
    mags = rng.integers(1, max_u + 1, size=length)
    signs = rng.choice([-1, 1], size=length)
    return GeneratorWord(tuple((int(r), int(m * e)) for r, m, e in zip(roots, mags, signs)))


def reduced_polynomial_mod(word: GeneratorWord, p: int) -> np.ndarray | None:
    """P mod p, straight from Ad(word) mod p; None if (T-1)**8 does not divide.

    For every element the eigenvalue 1 of Ad has multiplicity at least the
    rank, so (T-1)**8 divides the integer char poly and P mod p is the
    exact quotient of the reduced char poly.
    """
    m = word_product(word, modulus=p).data
    f = _kernels.hessenberg_charpoly(np.ascontiguousarray(m), p)
    one = np.array([p - 1, 1], dtype=np.int64)
    for _ in range(UNIT_MULTIPLICITY):
        f, r = _kernels.poly_divmod(f, one, p)
        if r.shape[0]:
            return None
    return f


def certify_word_modular(
    word: GeneratorWord, prime_budget: int = 80, start: int = 5, give_up_after: int = 15
) -> Certificate:
    """Certificate for a word without the integer char poly.

    Primes are scanned upward; a prime counts only if P mod p is squarefree
    with P(1) != 0 mod p, which makes it unramified and shows P(1) != 0.
    The semisimplicity step is not needed for the deduction and is skipped.
    """
    deds = [
        Deduction(
            "eigenvalue 1 of Ad(g) has multiplicity >= 8, so P mod p = det(T - Ad(g) mod p) / (T-1)^8",
            "standard-fact",
        )
    ]
    pats: list[ep.FactorPattern] = []
    odd = fifteen = None
    p = start - 1
    scanned = 0
    while scanned < prime_budget and (odd is None or fifteen is None):
        if scanned >= give_up_after and not any(q.squarefree for q in pats):
            break  # P is very likely inseparable; stop early, stay inconclusive
        p = sympy.nextprime(p)
        scanned += 1
        f = reduced_polynomial_mod(word, p)
        if f is None:
            continue
        pat = ep.pattern_of_residues(f, p)
        if pat.squarefree and int(_kernels.poly_rem(f, np.array([p - 1, 1], dtype=np.int64), p).sum()) == 0:
            pat = ep.FactorPattern(p, False)  # P(1) = 0 mod p: ramified at 1, skip
        pats.append(pat)
        if not pat.squarefree:
            continue
        if fifteen is None and pat.as_dict() == TYPE_15:
            fifteen = pat
        if odd is None and signature_of_type(pat.as_dict()) == -1:
            odd = pat
    sq = [q for q in pats if q.squarefree]
    if sq:
        deds.append(Deduction(f"P is squarefree mod {sq[0].prime} with P(1) != 0, hence separable", "computed"))
    if odd is not None:
        ct = ", ".join(f"{d}:{c}" for d, c in odd.degrees)
        deds.append(Deduction(f"Frobenius at {odd.prime} has cycle type {{{ct}}}, signature -1", "computed"))
    if fifteen is not None:
        deds.append(Deduction(f"Frobenius at {fifteen.prime} has cycle type {{15:16}}, the type of c^2", "computed"))
    assumptions = [AXIOM_CLASS_UNIQUENESS, AXIOM_MAXIMAL_SUBGROUPS]
    if sq and odd is not None and fifteen is not None:
        deds.append(Deduction(AXIOM_CLASS_UNIQUENESS, "axiom", AXIOM_CITATIONS[AXIOM_CLASS_UNIQUENESS]))
        deds.append(Deduction(AXIOM_MAXIMAL_SUBGROUPS, "axiom", AXIOM_CITATIONS[AXIOM_MAXIMAL_SUBGROUPS]))
        deds.append(Deduction("G = W(E8)", "computed"))
        conclusion, reason = CERTIFIED, ""
    else:
        conclusion, reason = INCONCLUSIVE, f"witness patterns not found within {scanned} primes"
    return Certificate(
        CERT_VERSION, word.to_json(), None, [q.to_json() for q in pats], deds, assumptions, conclusion, reason
    )


def certify_random_words(n_words: int = 200, length: int = 20, seed: int = 0, prime_budget: int = 80) -> dict:
    """Modular certification of seeded random integer words."""
    rng = np.random.default_rng(seed)
    outcomes = []
    for _ in range(n_words):
        word = random_integer_word(length, rng)
        cert = certify_word_modular(word, prime_budget)
        outcomes.append(
            {
                "word": word.to_json(),
                "conclusion": cert.conclusion,
                "reason": cert.reason,
                "primes_scanned": len(cert.primes),
            }
        )
    n_cert = sum(o["conclusion"] == CERTIFIED for o in outcomes)
    return {"n_words": n_words, "length": length, "seed": seed, "certified": n_cert, "outcomes": outcomes}
