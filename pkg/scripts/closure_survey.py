"""Closure of bounded model families under products, strong subalgebras and images."""

import argparse
import time

from fuzzalg import fixtures as F
from fuzzalg.algebra import dedupe_isomorphic
from fuzzalg.hsp import closure_check
from fuzzalg.semantics import enumerate_models, is_model

THEORIES = {"LS": F.semigroups, "LLI": F.left_ideals, "LRI": F.right_ideals, "LI": F.ideals}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("theories", nargs="*", default=list(THEORIES), choices=list(THEORIES))
    ap.add_argument("--max-size", type=int, default=3)
    ap.add_argument("--show", type=int, default=3, help="findings to print per theory")
    args = ap.parse_args()
    for name in args.theories:
        th = THEORIES[name]()
        t0 = time.perf_counter()
        fam = dedupe_isomorphic(enumerate_models(th, args.max_size))
        print(f"{name}: {len(fam)} models up to size {args.max_size} (up to isomorphism)")
        for mode in ("HSP_epi", "HSP_split"):
            r = closure_check(fam, mode, member=lambda A, th=th: is_model(A, th))
            flags = ", ".join(f"{k}={v}" for k, v in r.flags().items() if v is not None)
            counts = {k: len(v) for k, v in r.violations.items() if v}
            print(f"  {mode}: passed={r.passed} [{flags}] violations={counts} "
                  f"findings={len(r.findings)}")
            for w in (r.findings or [w for v in r.violations.values() for w in v])[:args.show]:
                A = w.algebra
                print(f"    {w.construction} of {w.sources}: carrier {A.carrier}, "
                      f"levels {[l.name for l in A.mu]}")
        print(f"  {time.perf_counter() - t0:.1f}s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
