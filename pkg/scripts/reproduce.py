"""Build P and Q for the 16-letter word, certify, and write everything to an output dir."""

import argparse
import json
import time

from e8galois import certify as cert
from e8galois import exactpoly as ep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out")
    ap.add_argument("--skip-semisimple", action="store_true")
    args = ap.parse_args()
    t0 = time.time()
    res = cert.reproduce_theorem1(args.out, check_semisimple=not args.skip_semisimple)
    P = res["P"]
    summary = {
        "degree": P.degree,
        "sha256": P.sha256(),
        "patterns": {p: ep.factor_degree_pattern(P, p).as_dict() for p in (7, 11, 13)},
        "conclusion": res["certificate"].conclusion,
        "seconds": round(time.time() - t0, 1),
    }
    print(json.dumps(summary, indent=2, default=str))


if __name__ == "__main__":
    main()
