"""Write the bundled synthetic-shape masks to disk as PGM files.

Usage: python scripts/make_fixtures.py --out fixtures/
"""

import argparse
from pathlib import Path

from contourflow.fileio import write_mask_pgm
from contourflow.shapes import full_suite


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="fixtures", help="output directory")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for fixture in full_suite():
        path = out / f"{fixture.name}_{fixture.size}.pgm"
        write_mask_pgm(path, fixture.mask)
        print(f"{path}  init={fixture.init_mode}  "
              f"{'concave' if fixture.concave else 'convex'}")


if __name__ == "__main__":
    main()
