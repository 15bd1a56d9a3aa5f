"""Hand transcription of the classical P_I^m displays, m = 0..4, as RHS - LHS.

Each term is (coefficient, {variable: exponent}). Running this script regenerates
hierarchy_m<m>.json in the canonical document layout used by pihier-core.
"""
import json
from fractions import Fraction

DISPLAYS = {
    0: [(1, {"s": 1}), (-4, {"q": 1})],
    1: [(1, {"s": 1}), (6, {"q": 2}), (-1, {"q2": 1})],
    2: [
        (4, {"s": 1}), (-40, {"q": 3}), (10, {"q1": 2}), (20, {"q": 1, "q2": 1}),
        (-16, {"t1": 1, "q": 1}), (-1, {"q4": 1}),
    ],
    3: [
        (16, {"s": 1}), (28, {"q": 1, "q4": 1}), (56, {"q1": 1, "q3": 1}), (42, {"q2": 2}),
        (-280, {"q": 2, "q2": 1}), (-280, {"q": 1, "q1": 2}), (280, {"q": 4}),
        (96, {"t2": 1, "q": 2}), (-16, {"t2": 1, "q2": 1}),
        (-64, {"t1": 1, "q": 1}), (-1, {"q6": 1}),
    ],
    4: [
        (64, {"s": 1}), (36, {"q": 1, "q6": 1}), (108, {"q1": 1, "q5": 1}),
        (228, {"q2": 1, "q4": 1}), (-504, {"q": 2, "q4": 1}), (138, {"q3": 2}),
        (-1512, {"q": 1, "q2": 2}), (-1848, {"q1": 2, "q2": 1}),
        (-2016, {"q": 1, "q1": 1, "q3": 1}), (-2016, {"q": 5}), (3360, {"q": 3, "q2": 1}),
        (5040, {"q": 2, "q1": 2}),
        (-640, {"t3": 1, "q": 3}), (160, {"t3": 1, "q1": 2}), (320, {"t3": 1, "q": 1, "q2": 1}),
        (-16, {"t3": 1, "q4": 1}),
        (384, {"t2": 1, "q": 2}), (-64, {"t2": 1, "q2": 1}),
        (-256, {"t1": 1, "q": 1}), (-1, {"q8": 1}),
    ],
}


def var_list(terms):
    orders = [0 if v == "q" else int(v[1:]) for _, m in terms for v in m if v.startswith("q")]
    times = [int(v[1:]) for _, m in terms for v in m if v.startswith("t")]
    out = [("q" if j == 0 else f"q{j}") for j in range(max(orders), -1, -1)] if orders else []
    out.append("s")
    out += [f"t{j}" for j in range(1, max(times, default=0) + 1)]
    return out


def document(terms):
    vs = var_list(terms)
    acc = {}
    for c, mono in terms:
        key = tuple(mono.get(v, 0) for v in vs)
        acc[key] = acc.get(key, 0) + Fraction(c)
    rows = sorted(((k, c) for k, c in acc.items() if c != 0),
                  key=lambda kc: (sum(kc[0]), kc[0]), reverse=True)
    return {
        "vars": vs,
        "terms": [{"exp": list(k), "num": str(c.numerator), "den": str(c.denominator)} for k, c in rows],
    }


if __name__ == "__main__":
    import os
    here = os.path.dirname(os.path.abspath(__file__))
    for m, terms in DISPLAYS.items():
        with open(os.path.join(here, f"hierarchy_m{m}.json"), "w") as f:
            json.dump(document(terms), f, indent=2)
            f.write("\n")
