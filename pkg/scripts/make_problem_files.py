#!/usr/bin/env python3
"""Regenerate the checked-in problem files under problems/.

The three general scenarios (paper_j1/2/3.json) use the bundled positive
definite covariance set; the _diag variants zero the off-diagonal entries,
which routes solving to the per-antenna linear program.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from wiretap.instances import reference_problem
from wiretap.probfile import save_problem


def main() -> None:
    out = pathlib.Path(__file__).resolve().parents[1] / "problems"
    out.mkdir(exist_ok=True)
    for j in (1, 2, 3):
        save_problem(out / f"paper_j{j}.json", reference_problem(j))
        save_problem(out / f"paper_j{j}_diag.json", reference_problem(j, diagonal=True))
    print(f"wrote 6 problem files to {out}")


if __name__ == "__main__":
    main()
