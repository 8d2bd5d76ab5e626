"""Exact discriminant of P: digit count, small prime powers and square cofactor check."""

import argparse
import json
import math
import time

import sympy

from e8galois import exactpoly as ep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--poly", required=True)
    ap.add_argument("--trial-bound", type=int, default=10**6)
    args = ap.parse_args()
    P = ep.read_poly(args.poly)
    t0 = time.time()
    rep: dict = {}
    D = ep.discriminant_exact(P, report=rep)
    elapsed = time.time() - t0
    cof, powers = abs(D), {}
    for q in sympy.primerange(2, args.trial_bound):
        while cof % q == 0:
            cof //= q
            powers[q] = powers.get(q, 0) + 1
    r = math.isqrt(cof)
    print(json.dumps({
        "digits": ep.decimal_digits(D),
        "sign": 1 if D > 0 else -1,
        "small_prime_powers": powers,
        "cofactor_is_square": r * r == cof,
        "primes_used": rep.get("primes"),
        "seconds": round(elapsed, 1),
    }, indent=2))


if __name__ == "__main__":
    main()
