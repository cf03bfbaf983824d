"""Write the two bundled derivations as JSON next to the fixtures file."""

from pathlib import Path

from fuzzalg import fixtures
from fuzzalg.proof.checker import check_derivation
from fuzzalg.serialize import dumps_derivation

DATA = Path(__file__).resolve().parents[1] / "src" / "fuzzalg" / "data"


def main() -> None:
    items = {
        "unit_membership.json": (fixtures.groups(), fixtures.unit_membership()),
        "normal_converse.json": (fixtures.normal_groups(), fixtures.normal_converse()),
    }
    for name, (theory, d) in items.items():
        check_derivation(theory, d)
        (DATA / name).write_text(dumps_derivation(d) + "\n")
        print(f"{name}: {d.size()} nodes, depth {d.depth()}: {d.conclusion}")


if __name__ == "__main__":
    main()
