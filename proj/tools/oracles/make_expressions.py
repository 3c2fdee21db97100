"""Builds fixtures/expressions.json: random generator expressions of depth <= 4
with their exact values computed by Python integers, plus huge cases whose
log2 is computed with mpmath."""
import json
import math
import random
import sys

import mpmath

mpmath.mp.dps = 80
rng = random.Random(4242)


def gen(depth):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.4:
            return str(rng.randint(0, 30))
        if r < 0.7:
            return "n"
        return "m"
    op = rng.choice(["+", "-", "*", "^", "!", "neg", "+", "*"])
    if op == "!":
        return "(" + gen(0) + ")!"
    if op == "neg":
        return "-(" + gen(depth - 1) + ")"
    if op == "^":
        return "(" + gen(depth - 1) + ")^(" + gen(0) + ")"
    return "(" + gen(depth - 1) + ")" + op + "(" + gen(depth - 1) + ")"


def evaluate(s, n, m):
    # Python evaluation with the same grammar: ^ -> **, postfix ! -> factorial
    py = s.replace("^", "**")
    while "!" in py:
        i = py.index("!")
        assert py[i - 1] == ")"
        depth = 0
        j = i - 1
        while True:
            if py[j] == ")":
                depth += 1
            elif py[j] == "(":
                depth -= 1
                if depth == 0:
                    break
            j -= 1
        py = py[:j] + "math.factorial" + py[j:i] + py[i + 1:]
    return eval(py, {"math": math, "n": n, "m": m})


def main(out):
    cases = []
    while len(cases) < 1000:
        s = gen(4)
        n, m = rng.randint(1, 12), rng.randint(1, 12)
        try:
            v = evaluate(s, n, m)
        except (ValueError, ZeroDivisionError):
            continue
        if not isinstance(v, int) or abs(v).bit_length() > 4000:
            continue
        cases.append({"expr": s, "n": n, "m": m, "value": str(v)})
    huge = []
    for s, n, m, log2 in [
        ("10^(n!)", 25, 0, mpmath.factorial(25) * mpmath.log(10, 2)),
        ("2^((n+m)*2^(n+m))", 30, 2, 32 * mpmath.mpf(2) ** 32),
        ("3^(2^40)+5", 1, 0, mpmath.mpf(2) ** 40 * mpmath.log(3, 2)),
        ("7^(3^30)*11^(2^50)", 1, 0, 3**30 * mpmath.log(7, 2) + 2**50 * mpmath.log(11, 2)),
    ]:
        huge.append({"expr": s, "n": n, "m": m, "log2": mpmath.nstr(log2, 60)})
    errors = [
        {"expr": "2^^n", "column": 3},
        {"expr": "n+", "column": 3},
        {"expr": "(n*2", "column": 5},
        {"expr": "2/n", "column": 2},
        {"expr": "k+1", "column": 1},
        {"expr": "", "column": 1},
    ]
    with open(out, "w") as fh:
        json.dump({"schema": 1, "exact": cases, "huge": huge, "errors": errors}, fh, indent=0)
    print(len(cases), "exact cases")


if __name__ == "__main__":
    main(sys.argv[1])
