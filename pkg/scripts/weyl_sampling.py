"""Uniform W(E8) sampling: frequencies of the two witness cycle types."""

import argparse
import json

from e8galois import weyl


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=100000)
    ap.add_argument("--seed", type=int, default=9)
    args = ap.parse_args()
    freq = weyl.class_frequency_experiment(args.samples, seed=args.seed)
    out = {
        "classes_seen": len(freq),
        "15:16": weyl.binomial_check(freq.get(weyl.type_key(weyl.TYPE_15), 0), args.samples, 1 / 30),
        "4:2,8:29": weyl.binomial_check(freq.get(weyl.type_key(weyl.TYPE_4_8), 0), args.samples, 1 / 16),
    }
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
