"""Print bounded free models of the bundled theories over a fuzzy set of generators."""

import argparse

from fuzzalg import fixtures as F
from fuzzalg.frame import FuzzySet
from fuzzalg.semantics import free_model

THEORIES = {"LS": F.semigroups, "LLI": F.left_ideals, "LI": F.ideals, "LG": F.groups}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("theory", choices=list(THEORIES), nargs="?", default="LS")
    ap.add_argument("--gens", default="a:h,b:1", help="comma list of name:level over H3")
    ap.add_argument("--depth", type=int, default=3)
    args = ap.parse_args()
    H = F.H3()
    gens = dict(item.split(":") for item in args.gens.split(",") if item)
    M = FuzzySet(H, {k: H[v] for k, v in gens.items()})
    fm = free_model(THEORIES[args.theory](), M, args.depth)
    tm = fm.model
    print(f"{len(tm.interior)} interior classes, {len(tm.reps) - len(tm.interior)} at the frontier")
    for c in tm.interior:
        print(f"  {tm.reps[c]}  level {tm.levels[c]}  ({tm.sizes[c]} terms)")
    for m in sorted(gens):
        print(f"unit {m} -> class {tm.reps[fm.unit[m]]} at level {fm.unit_level(m)} "
              f"(generator level {M[m]})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
