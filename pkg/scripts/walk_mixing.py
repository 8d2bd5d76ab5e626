"""Pattern frequencies of random walks mod p for several walk lengths."""

import argparse
import json

from e8galois import certify as cert


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=101)
    ap.add_argument("--steps", default="10,20,40,200")
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    for k in (int(x) for x in args.steps.split(",")):
        rep = cert.walk_statistics(cert.WalkSpec(args.p, k, args.samples, args.seed), threads=args.threads)
        t = rep["targets"]
        print(json.dumps({
            "steps": k,
            "degenerate": rep["degenerate"],
            "non_squarefree": rep["non_squarefree"],
            "freq_15_16": round(t["15:16"]["freq"], 4),
            "freq_4_2_8_29": round(t["4:2,8:29"]["freq"], 4),
            "ok": t["15:16"]["ok"] and t["4:2,8:29"]["ok"],
            "seconds": rep["seconds"],
        }))


if __name__ == "__main__":
    main()
