#!/usr/bin/env python3
"""Run the acceptance criteria and print one line per criterion.

Exit status is 0 when every selected criterion passes, 1 otherwise.
"""

from __future__ import annotations

import argparse
import sys

from fivelist.acceptance import CRITERIA, AcceptanceConfig


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--only", type=int, nargs="*", help="criterion numbers to run (default: all)")
    args = p.parse_args(argv)
    cfg = AcceptanceConfig(seed=args.seed, workers=args.workers)
    chosen = [c for i, c in enumerate(CRITERIA, 1) if not args.only or i in args.only]
    ok = True
    for check in chosen:
        v = check(cfg)
        print(f"{v.line()}  [{v.seconds:.1f}s]", flush=True)
        ok &= v.ok
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
