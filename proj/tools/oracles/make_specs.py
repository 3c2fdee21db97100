"""Writes the product spec corpus under fixtures/specs/ together with
fixtures/eval_oracle.json, which holds partial products x_1..x_8 computed
from closed forms of alpha with mpmath at 60 digits."""
import json
import math
import os
import sys

import mpmath

mpmath.mp.dps = 60
ROOT = os.path.join(os.path.dirname(__file__), "..", "..", "fixtures")

geom = lambda c, r, start=1: {"kind": "geometric", "c": c, "r": r, "start": start}
power = lambda eps, start=1: {"kind": "power", "epsilon": eps, "start": start}
zeta = lambda c, s, start=1: {"kind": "zeta", "c": c, "s": s, "start": start}

I = mpmath.mpc(0, 1)
A = lambda n, m: mpmath.mpf(2) ** ((n + m) ** 2)

# name, kind, body, alpha(n[,m]) as mpmath number, b(n[,m]), description
SEQUENCES = [
    ("double_exponential", {"alpha": "2^(2^n)", "tail_majorant": power("1")},
     lambda n: mpmath.mpf(2) ** (2 ** n), lambda n: 1, "alpha_n = 2^(2^n), closed form 4/3"),
    ("double_exponential_geometric", {"alpha": "2^(2^n)", "tail_majorant": geom("562949953421312", "1/65536", 4)},
     lambda n: mpmath.mpf(2) ** (2 ** n), lambda n: 1, "same product, geometric majorant from n = 4"),
    ("certified_family",
     {"alpha": "2^(n*2^n)", "epsilon": "1/2", "a": "1/2", "e": 1, "D": 1, "tail_majorant": power("1"),
      "asserted": ["h4.infinitely_often", "h5.divergence"]},
     lambda n: mpmath.mpf(2) ** (n * 2 ** n), lambda n: 1, "alpha_n = 2^(n 2^n) with attestations"),
    ("factorial_tower", {"alpha": "10^(n!)", "tail_majorant": geom("2", "1/10")},
     lambda n: mpmath.mpf(10) ** math.factorial(n), lambda n: 1, "alpha_n = 10^(n!)"),
    ("powers_of_three", {"alpha": "3^n", "tail_majorant": geom("2", "1/3")},
     lambda n: mpmath.mpf(3) ** n, lambda n: 1, "alpha_n = 3^n"),
    ("quadratic_growth", {"alpha": "2*n^2", "tail_majorant": zeta("1", "2")},
     lambda n: mpmath.mpf(2 * n * n), lambda n: 1, "alpha_n = 2n^2, zeta majorant"),
    ("cubic_growth", {"alpha": "n^3+1", "tail_majorant": zeta("1", "3")},
     lambda n: mpmath.mpf(n ** 3 + 1), lambda n: 1, "alpha_n = n^3 + 1"),
    ("negative_squares", {"alpha": "-(2^(n^2))", "e": -1, "tail_majorant": geom("2", "1/2")},
     lambda n: -mpmath.mpf(2) ** (n * n), lambda n: 1, "alpha_n = -2^(n^2), the e = -1 family"),
    ("negative_powers", {"alpha": "-(3^n)", "e": -1, "tail_majorant": geom("2", "1/3")},
     lambda n: -mpmath.mpf(3) ** n, lambda n: 1, "alpha_n = -3^n"),
    ("scaled_sqrt2",
     {"alpha": {"poly": ["-(2^(2*n+1))", "0", "1"], "hint": ["2^n*1414/1000", "0"]},
      "tail_majorant": geom("1", "1/2")},
     lambda n: mpmath.sqrt(2) * 2 ** n, lambda n: 1, "alpha_n = 2^n sqrt 2"),
    ("imaginary_powers",
     {"alpha": {"poly": ["16^n", "0", "1"], "hint": ["0", "4^n"]}, "tail_majorant": geom("2", "1/4")},
     lambda n: I * mpmath.mpf(4) ** n, lambda n: 1, "alpha_n = i 4^n"),
    ("gaussian_diagonal",
     {"alpha": {"poly": ["2*4^n", "-2*2^n", "1"], "hint": ["2^n", "2^n"]}, "tail_majorant": geom("1", "1/2")},
     lambda n: (1 + I) * mpmath.mpf(2) ** n, lambda n: 1, "alpha_n = (1+i) 2^n"),
    ("finite_three", {"alpha": {"list": ["2", "3", "5"]}},
     None, None, "three explicit terms, exact value 12/5"),
    ("weighted", {"alpha": "5^n", "b": "2^n", "tail_majorant": geom("2", "2/5")},
     lambda n: mpmath.mpf(5) ** n, lambda n: 2 ** n, "alpha_n = 5^n, b_n = 2^n"),
    ("factorial_plus_one", {"alpha": "n!+1", "tail_majorant": geom("2", "1/2")},
     lambda n: mpmath.mpf(math.factorial(n) + 1), lambda n: 1, "alpha_n = n! + 1"),
]

ARRAYS = [
    ("array_double_exponential", {"alpha": "2^(2^(n+m))", "tail_majorant": geom("1", "1/2")},
     lambda n, m: mpmath.mpf(2) ** (2 ** (n + m)), lambda n, m: 1, "alpha_{n,m} = 2^(2^(n+m))"),
    ("array_certified_family",
     {"alpha": "2^((n+m)*2^(n+m))", "epsilon": "1/2", "D": 1, "sign_mode": "main", "tail_majorant": geom("1", "1/2"),
      "asserted": ["g5.limsup"], "eventual_start": {"g2": 8}},
     lambda n, m: mpmath.mpf(2) ** ((n + m) * 2 ** (n + m)), lambda n, m: 1, "alpha_{n,m} = 2^((n+m) 2^(n+m))"),
    ("array_mode_I",
     {"alpha": {"poly": ["4^((n+m)^2)", "0", "1"], "hint": ["0", "2^((n+m)^2)"]}, "sign_mode": "I",
      "tail_majorant": geom("1", "1/2")},
     lambda n, m: I * A(n, m), lambda n, m: 1, "alpha = i 2^((n+m)^2)"),
    ("array_mode_II",
     {"alpha": {"poly": ["2*4^((n+m)^2)", "-2*2^((n+m)^2)", "1"], "hint": ["2^((n+m)^2)", "2^((n+m)^2)"]},
      "sign_mode": "II", "tail_majorant": geom("1", "1/2")},
     lambda n, m: (1 + I) * A(n, m), lambda n, m: 1, "alpha = (1+i) 2^((n+m)^2)"),
    ("array_mode_III",
     {"alpha": {"poly": ["5*4^((n+m)^2)", "-4*2^((n+m)^2)", "1"], "hint": ["2*2^((n+m)^2)", "2^((n+m)^2)"]},
      "sign_mode": "III", "tail_majorant": geom("1", "1/2")},
     lambda n, m: (2 + I) * A(n, m), lambda n, m: 1, "alpha = (2+i) 2^((n+m)^2)"),
    ("array_mode_IV",
     {"alpha": "-(2^((n+m)^2))", "sign_mode": "IV", "mode_params": {"X": "1/2", "R": "1"},
      "tail_majorant": geom("1", "1/2")},
     lambda n, m: -A(n, m), lambda n, m: 1, "alpha = -2^((n+m)^2)"),
    ("array_powers_of_three", {"alpha": "3^(n+m)", "tail_majorant": geom("1", "1/2")},
     lambda n, m: mpmath.mpf(3) ** (n + m), lambda n, m: 1, "alpha = 3^(n+m)"),
    ("array_conjugate_mode_I",
     {"alpha": {"poly": ["4^((n+m)^2)", "0", "1"], "hint": ["0", "-(2^((n+m)^2))"]}, "sign_mode": "I", "e": -1,
      "tail_majorant": geom("1", "1/2")},
     lambda n, m: -I * A(n, m), lambda n, m: 1, "alpha = -i 2^((n+m)^2), e = -1"),
]


def product_1d(alpha, b, N):
    x = mpmath.mpc(1)
    for n in range(1, N + 1):
        x *= 1 + b(n) / alpha(n)
    return x


def product_2d(alpha, b, N):
    x = mpmath.mpc(1)
    for m in range(1, N + 1):
        x *= 1 + sum(b(n, m) / alpha(n, m) for n in range(1, N - m + 2))
    return x


def write(name, kind, body, description):
    doc = {"schema": 1, "kind": kind, "meta": {"name": name, "description": description}, "body": body}
    with open(os.path.join(ROOT, "specs", name + ".json"), "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def main():
    os.makedirs(os.path.join(ROOT, "specs"), exist_ok=True)
    oracle = {}
    for name, body, alpha, b, desc in SEQUENCES:
        write(name, "product", body, desc)
        if alpha is not None:
            oracle[name] = [[mpmath.nstr(v.real, 45), mpmath.nstr(v.imag, 45)]
                            for v in (product_1d(alpha, b, N) for N in range(1, 9))]
    for name, body, alpha, b, desc in ARRAYS:
        write(name, "product_of_series", body, desc)
        oracle[name] = [[mpmath.nstr(v.real, 45), mpmath.nstr(v.imag, 45)]
                        for v in (product_2d(alpha, b, N) for N in range(1, 9))]
    with open(os.path.join(ROOT, "eval_oracle.json"), "w") as f:
        json.dump(oracle, f, indent=1, sort_keys=True)
        f.write("\n")
    print(len(SEQUENCES) + len(ARRAYS), "specs", file=sys.stderr)


main()
