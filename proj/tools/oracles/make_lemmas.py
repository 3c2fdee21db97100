"""Writes the lemma case suite fixtures/lemmas/suite.json and
fixtures/lemma_oracle.json with the true values of both sides for each case
(log2 of them for the jump and prod_huge cases), computed with mpmath."""
import json
import os
from fractions import Fraction

import mpmath

mpmath.mp.dps = 50
ROOT = os.path.join(os.path.dirname(__file__), "..", "..", "fixtures")

CASES = [
    {"name": "series_upper_2n2", "lemma": "series_upper", "a": "2*n^2", "epsilon": "1", "N": 1, "prefix": 200,
     "majorant": {"kind": "zeta", "c": "1", "s": "2"}},
    {"name": "series_upper_cubes", "lemma": "series_upper", "a": "n^3+1", "epsilon": "1", "N": 3, "prefix": 100,
     "majorant": {"kind": "zeta", "c": "1", "s": "3"}},
    {"name": "jump_powers", "lemma": "jump", "a": "2^n", "prefix": 50},
    {"name": "jump_fixed_k", "lemma": "jump", "a": "n!", "prefix": 20, "jump_k": 2},
    {"name": "series_general_double_exponential", "lemma": "series_general", "a": "2^(2^n)", "epsilon": "1/2",
     "N": 3, "prefix": 8, "majorant": {"kind": "geometric", "c": "1", "r": "1/2", "start": 4}},
    {"name": "series_fast_double_exponential", "lemma": "series_fast", "a": "2^(2^n)", "epsilon": "1/2",
     "N": 4, "prefix": 8, "majorant": {"kind": "geometric", "c": "1", "r": "1/2", "start": 4}},
    {"name": "series_fast_t3", "lemma": "series_fast", "a": "2^(2^n)", "epsilon": "1/2",
     "N": 3, "prefix": 8, "majorant": {"kind": "geometric", "c": "1", "r": "1/2", "start": 4}},
    {"name": "corollary_fast_interval", "lemma": "corollary_fast", "a": "2^(2^n)", "epsilon": "1/2", "N": 3, "k": 6},
    {"name": "prod_huge_factorial", "lemma": "prod_huge", "a": "2^(n*n!)", "D": 1, "Dn": "1", "delta": "0",
     "prefix": 12},
    {"name": "prod_huge_weighted", "lemma": "prod_huge", "a": "2^((n+1)!*8^n)", "D": 2, "Dn": "2", "delta": "1/2",
     "prefix": 8},
    {"name": "size_of_product_halves", "lemma": "size_of_product", "a": "1/2^n", "prefix": 60,
     "majorant": {"kind": "geometric", "c": "1", "r": "1/2"}},
    {"name": "size_of_product_negative", "lemma": "size_of_product", "a": "-1/2^n", "prefix": 60,
     "majorant": {"kind": "geometric", "c": "1", "r": "1/2"}},
    {"name": "size_of_product_alternating", "lemma": "size_of_product", "a": "(-1)^n/(n^2+1)", "prefix": 400,
     "majorant": {"kind": "zeta", "c": "1", "s": "2"}},
]

lam = lambda L, p: mpmath.log(L * mpmath.log(2)) ** (-p)
slow = lambda L, eps: mpmath.mpf(2) ** (L * (lam(L, 3 + eps) - 1))
dexp = lambda n: mpmath.mpf(2) ** n  # log2 of 2^(2^n)


def oracle(c):
    q = Fraction(c.get("epsilon", "1"))
    eps = mpmath.mpf(q.numerator) / q.denominator
    N = c.get("N", 1)
    name = c["lemma"]
    if name == "series_upper":
        a = {"2*n^2": lambda n: 2 * n * n, "n^3+1": lambda n: n ** 3 + 1}[c["a"]]
        lhs = mpmath.nsum(lambda n: 1 / mpmath.mpf(a(int(n))), [N, mpmath.inf])
        rhs = (2 + 1 / eps) / mpmath.mpf(a(N)) ** (eps / (1 + eps))
    elif name in ("series_general", "series_fast", "corollary_fast"):
        end = c["k"] if name == "corollary_fast" else N + 20
        lhs = sum(slow(dexp(n), eps) for n in range(N, end + 1))
        if name == "series_general":
            rhs = mpmath.mpf(2) ** (-dexp(N) * eps / (2 * (1 + eps)))
        else:
            rhs = mpmath.mpf(2) ** (dexp(N) * (lam(dexp(N), 3 + eps / 2) - 1))
    elif name == "jump":
        return None
    elif name == "prod_huge":
        if c["name"] == "prod_huge_factorial":
            # N = 1 only meets the root bound with equality; at N = 2,
            # log2 a_3 = 18 against 3! log2(5/4) + 1 log2 a_1 + 2 log2 a_2
            lhs, rhs = mpmath.mpf(18), 6 * mpmath.log(mpmath.mpf(5) / 4, 2) + 1 + 2 * 4
        else:
            return None
    else:
        seq = {"1/2^n": lambda n: mpmath.mpf(2) ** -n, "-1/2^n": lambda n: -mpmath.mpf(2) ** -n,
               "(-1)^n/(n^2+1)": lambda n: mpmath.mpf(-1) ** n / (n * n + 1)}[c["a"]]
        K = 4000
        x, best = mpmath.mpf(1), mpmath.mpf(1)
        for n in range(1, K + 1):
            x *= 1 + seq(n)
            best = max(best, abs(x))
        lhs = abs(1 - x)
        rhs = best * sum(abs(seq(n)) for n in range(1, K + 1))
        return {"lhs": mpmath.nstr(lhs, 12), "rhs": mpmath.nstr(rhs, 12), "C": mpmath.nstr(best, 12), "tol": "1e-3"}
    return {"lhs": mpmath.nstr(lhs, 30), "rhs": mpmath.nstr(rhs, 30)}


def main():
    os.makedirs(os.path.join(ROOT, "lemmas"), exist_ok=True)
    doc = {"schema": 1, "kind": "lemma", "meta": {"name": "lemma_suite", "description": "one or more cases per lemma id"},
           "body": {"cases": CASES}}
    with open(os.path.join(ROOT, "lemmas", "suite.json"), "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
    out = {c["name"]: o for c in CASES if (o := oracle(c)) is not None}
    with open(os.path.join(ROOT, "lemma_oracle.json"), "w") as f:
        json.dump(out, f, indent=1, sort_keys=True)
        f.write("\n")


main()
