#!/usr/bin/env python3
"""Convert a SnapPy/SnapPea-style gluing-equations export into the gluing
file format consumed by `certikraw`.

The expected input is the JSON dump produced by this snippet inside a
SnapPy session (the standard kernel conventions: one row of the equation
matrix per edge, then a meridian row and a longitude row per cusp, with
three columns per tetrahedron holding the multiplicities of z, 1/(1-z) and
(z-1)/z):

    import json, snappy
    M = snappy.Manifold("4_1(5,1)")
    json.dump({
        "name": M.name(),
        "num_tetrahedra": M.num_tetrahedra(),
        "num_cusps": M.num_cusps(),
        "gluing_equations": [list(r) for r in M.gluing_equations()],
        "dehn_fillings": [list(c) for c in M.cusp_info("filling")],
        "tet_shapes": [[z.real, z.imag] for z in M.tetrahedra_shapes("rect")],
    }, open("export.json", "w"))

Usage:
    convert_gluing_export.py export.json > manifold.json
"""

import json
import sys
from fractions import Fraction


def fail(msg):
    sys.exit(f"error: {msg}")


def convert(export):
    n = export["num_tetrahedra"]
    cusps = export["num_cusps"]
    matrix = export["gluing_equations"]
    if len(matrix) != n + 2 * cusps:
        fail(
            f"expected {n + 2 * cusps} equation rows "
            f"({n} edges + 2 per cusp), got {len(matrix)}"
        )

    def split_row(row):
        if len(row) != 3 * n:
            fail(f"row has {len(row)} columns, expected {3 * n}")
        a = [int(row[3 * j]) for j in range(n)]
        b = [int(row[3 * j + 1]) for j in range(n)]
        c = [int(row[3 * j + 2]) for j in range(n)]
        return a, b, c

    rows = []
    for i in range(n):
        a, b, c = split_row(matrix[i])
        rows.append({"kind": "edge", "a": a, "b": b, "c": c})
    for t in range(cusps):
        for kind, offset in (("meridian", 0), ("longitude", 1)):
            a, b, c = split_row(matrix[n + 2 * t + offset])
            rows.append({"kind": kind, "cusp": t, "a": a, "b": b, "c": c})

    fillings = []
    for t, slope in enumerate(export.get("dehn_fillings", [])):
        p, q = slope
        if (p, q) == (0, 0):
            continue  # unfilled cusp
        pf, qf = Fraction(p), Fraction(q)
        if pf.denominator != 1 or qf.denominator != 1:
            fail(f"cusp {t}: non-integral filling slope ({p}, {q})")
        fillings.append({"cusp": t, "p": int(pf), "q": int(qf)})

    out = {
        "name": export.get("name", "unnamed"),
        "n": n,
        "k": cusps - len(fillings),
        "h": len(fillings),
        "rows": rows,
        "fillings": fillings,
    }
    shapes = export.get("tet_shapes")
    if shapes:
        out["approx_solution"] = [[float(z[0]), float(z[1])] for z in shapes]
    return out


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    with open(sys.argv[1]) as fh:
        export = json.load(fh)
    json.dump(convert(export), sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
