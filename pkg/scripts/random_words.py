"""Modular certification of seeded random words; prints the certified fraction."""

import argparse
import json
from collections import Counter

from e8galois import certify as cert


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--words", type=int, default=200)
    ap.add_argument("--length", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    args = ap.parse_args()
    res = cert.certify_random_words(args.words, args.length, args.seed)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(res, fh, indent=2)
    reasons = Counter(o["reason"].split(" within")[0] for o in res["outcomes"] if o["conclusion"] != cert.CERTIFIED)
    print(json.dumps({"words": res["n_words"], "certified": res["certified"], "inconclusive_reasons": reasons}, indent=2))


if __name__ == "__main__":
    main()
