"""Builds fixtures/corpus.json: irreducible integer polynomials of degree <= 8
with a selected root and independent high-precision house / Mahler values."""
import json
import random
import sys

import mpmath
import sympy as sp

mpmath.mp.dps = 60
x = sp.symbols("x")


def entry(poly):
    p = sp.Poly(poly, x)
    assert p.is_irreducible, poly
    coeffs = [int(c) for c in reversed(p.all_coeffs())]
    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
    roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=500, extraprec=400)
    roots = [mpmath.mpc(r) for r in roots]
    # selected root: the one of largest real part, ties by imaginary part
    sel = max(roots, key=lambda r: (mpmath.nstr(r.real, 20), r.imag))
    sel = max(roots, key=lambda r: (r.real, r.imag))
    house = max(abs(r) for r in roots)
    mahler = abs(coeffs[-1])
    for r in roots:
        mahler *= max(1, abs(r))
    return {
        "poly": coeffs,
        "hint": [mpmath.nstr(sel.real, 12), mpmath.nstr(sel.imag, 12)],
        "house": mpmath.nstr(house, 40),
        "mahler": mpmath.nstr(mahler, 40),
        "integer": coeffs[-1] == 1,
    }


def main(out_path):
    polys = []
    for d in range(1, 9):
        polys.append(x**d - 2)
    polys += [x - 5, x + 7, x - 1, 2 * x - 1, 3 * x + 2, x**2 + 1, x**2 - x - 1, x**2 - 3, x**2 + x + 1,
              x**3 - x - 1, x**4 + 1, x**4 - 10 * x**2 + 1, x**6 + x**5 + x**4 + x**3 + x**2 + x + 1,
              x**5 - x - 1, 2 * x**2 - 3, 5 * x**3 - 2 * x + 1, x**8 + x**7 + x**2 + 1 + x**3]
    rng = random.Random(20261014)
    while len(polys) < 64:
        d = rng.randint(2, 8)
        coeffs = [rng.randint(-6, 6) for _ in range(d)] + [1 if rng.random() < 0.8 else rng.randint(2, 4)]
        if coeffs[0] == 0:
            continue
        poly = sum(c * x**i for i, c in enumerate(coeffs))
        if sp.Poly(poly, x).is_irreducible and poly not in polys:
            polys.append(poly)
    data = [entry(p) for p in polys]
    with open(out_path, "w") as fh:
        json.dump({"schema": 1, "numbers": data}, fh, indent=1)
    print(len(data), "entries")


if __name__ == "__main__":
    main(sys.argv[1])
