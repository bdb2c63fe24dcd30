"""Regenerate the bundled fixture corpus (inputs and expected gauss reports).

Every fixture is cross-checked against the brute-force oracle before its
expected report is written.

    python scripts/make_corpus.py
"""

import json
from math import comb
from pathlib import Path

from toricgauss.cli import encode_document, run
from toricgauss.families import box_points, hexagon, pnN_points, simplex_points, singular_surface
from toricgauss.oracle import cross_check

OUT = Path(__file__).resolve().parents[1] / "src" / "toricgauss" / "corpus"


def fixtures():
    yield "singular_surface_k2", singular_surface(), 2
    for n in (2, 3):
        for N in (2, 3, 4):
            yield f"pnN_n{n}_N{N}_k2", pnN_points(n, N), 2
    for n in (1, 2, 3):
        for k in (1, 2, 3):
            yield f"simplex_n{n}_k{k}", simplex_points(n, k), k
    for k in (1, 2, 3):
        yield f"square_k{k}", box_points([k, k]), k
    yield "hexagon_k1", hexagon(), 1
    yield "hexagon_k2", hexagon(), 2


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, pts, k in fixtures():
        q = comb(pts.ambient_rank + k, k)
        if comb(len(pts), q) <= 10**5:
            cross_check(pts, k)
        doc = {"schema": 1, "points": [list(p) for p in pts], "order": k}
        (OUT / f"{name}.input.json").write_text(json.dumps(doc) + "\n")
        (OUT / f"{name}.expected.json").write_text(encode_document(run("gauss", doc)))
        print(name)


if __name__ == "__main__":
    main()
