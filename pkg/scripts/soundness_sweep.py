"""Random (theory, model, derivation) triples: every checked conclusion must hold in the model."""

import argparse
import random
import time
from collections import Counter

from fuzzalg.generate import (DerivationConfig, random_algebra, random_derivation, random_frame,
                              random_signature, theory_satisfied_by)
from fuzzalg.proof import Sub, check_derivation
from fuzzalg.semantics import is_model, sequent_violation
from fuzzalg.syntax import Language


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", "--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-size", type=int, default=4)
    ap.add_argument("--max-depth", type=int, default=6)
    ap.add_argument("--no-sub", action="store_true")
    args = ap.parse_args()
    cfg = DerivationConfig(max_depth=args.max_depth, allow_sub=not args.no_sub)
    depths, frames, bad = Counter(), Counter(), []
    t0 = time.perf_counter()
    for i in range(args.count):
        rng = random.Random(args.seed + i)
        frame = random_frame(rng)
        sig = random_signature(rng)
        A = random_algebra(rng, sig, frame, args.max_size)
        th = theory_satisfied_by(rng, A, Language(sig, ("x", "y", "z")))
        assert is_model(A, th)
        d = random_derivation(rng, th, cfg)
        s = check_derivation(th, d)
        depths[d.depth()] += 1
        frames[frame.name] += 1
        v = sequent_violation(A, s)
        if v is not None:
            bad.append((args.seed + i, str(s), v))
    took = time.perf_counter() - t0
    print(f"{args.count} triples in {took:.1f}s, {len(bad)} violations")
    print("depths:", dict(sorted(depths.items())))
    print("frames:", dict(sorted(frames.items())))
    print("with Sub:", "disabled" if args.no_sub else "enabled")
    for seed, s, v in bad[:10]:
        print(f"  seed {seed}: {s} fails at {v}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
