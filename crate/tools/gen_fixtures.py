#!/usr/bin/env python3
"""Regenerate the bundled manifests in crates/core/fixtures.

The tables are instantiated from closed forms in k and checked with sympy
before anything is written: the transported Lift(F) table, the scalars of the
five combinations, the augmentation recipes and the equation h(X, Z^k).
Run from the repository root:  python3 tools/gen_fixtures.py
"""

import json
import pathlib
import sys

from sympy import Matrix, Poly, cancel, diff, div, expand, symbols, sympify

OUT = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"
SCHEMA = "germlift-manifest/1"

U1, V1, V2, W1, W2 = T = symbols("U1 V1 V2 W1 W2")
u1, v1, v2, y, x = symbols("u1 v1 v2 y x")
X, Y, Z = symbols("X Y Z")


def txt(e):
    return str(expand(sympify(e))).replace("**", "^")


def field(entries):
    return [txt(e) for e in entries]


def fail(msg):
    sys.exit(f"gen_fixtures: {msg}")


LABELS_F = ["e", "k1^1", "k1^2", "k1^3", "k2^1", "k2^2", "k2^3"]


def lift_f():
    return [
        [2 * U1, 2 * V1, V2, 3 * W1, 3 * W2],
        [4 * U1**2, -3 * U1 * V1 + 3 * V2 * W1, -5 * U1 * V2 - 3 * W2, 6 * U1 * W1, -3 * V1 * W1 + 2 * U1 * W2],
        [6 * U1, -3 * V1, -6 * V2, 9 * W1, 0],
        [9 * V1, -6 * V2**2, 0, 9 * W2 + 3 * U1 * V2, 3 * V1 * V2],
        [0, -3 * U1 * V2 - 3 * W2, 3 * V1, 0, -3 * V2 * W1],
        [-9 * W1, 2 * U1 * V2, -3 * V1, 2 * U1**2, 6 * V2 * W1 + 2 * U1 * V1],
        [-9 * W2 - 3 * U1 * V2, -3 * V1 * V2, 0, 3 * U1 * V1, 6 * V2 * W2 + 3 * V1**2],
    ]


def lift_fk(k):
    w = W1 ** (k - 1)
    return [
        [2 * U1, 2 * V1, V2 - (3 * k - 4) * w, 3 * W1, 3 * W2],
        [4 * U1**2, -3 * U1 * V1 + 3 * V2 * W1 + 3 * W1**k, -5 * U1 * V2 - (6 * k - 1) * U1 * w - 3 * W2,
         6 * U1 * W1, -3 * V1 * W1 + 2 * U1 * W2],
        [6 * U1, -3 * V1, -6 * V2 - (9 * k - 3) * w, 9 * W1, 0],
        [9 * V1, -6 * V2**2 - 12 * V2 * w - 6 * W1 ** (2 * k - 2),
         -9 * (k - 1) * W1 ** (k - 2) * W2 - 3 * (k - 1) * U1 * V2 * W1 ** (k - 2) - 3 * (k - 1) * U1 * W1 ** (2 * k - 3),
         9 * W2 + 3 * U1 * V2 + 3 * U1 * w, 3 * V1 * V2 + 3 * V1 * w],
        [0, -3 * U1 * V2 - 3 * U1 * w - 3 * W2, 3 * V1, 0, -3 * V2 * W1 - 3 * W1**k],
        [-9 * W1, 2 * U1 * V2 + 2 * U1 * w, -3 * V1 - 2 * (k - 1) * U1**2 * W1 ** (k - 2), 2 * U1**2,
         6 * V2 * W1 + 6 * W1**k + 2 * U1 * V1],
        [-9 * W2 - 3 * U1 * V2 - 3 * U1 * w, -3 * V1 * V2 - 3 * V1 * w, -3 * (k - 1) * U1 * V1 * W1 ** (k - 2),
         3 * U1 * V1, 6 * V2 * W2 + 6 * w * W2 + 3 * V1**2],
    ]


def lift_hk(k):
    return [
        [(3 * k - 2) * V1, 3 * W1, (3 * k - 1) * W2],
        [V1**2 + (3 * k - 1) * W1 ** (k - 1) * W2, -3 * V1 * W1, (3 * k - 1) * W1 ** (2 * k - 1)],
        [W2**2 - V1 * W1**k, 0, V1**2 * W1 + W1**k * W2],
        [(3 * k - 1) * W1 ** (2 * k - 1) + V1 * W2, -3 * W1 * W2, -(3 * k - 1) * V1 * W1**k],
        [-(3 * k - 1) * W1 ** (2 * k - 2) * W2 - V1**2 * W1 ** (k - 1), 3 * W2**2,
         3 * k * V1 * W1 ** (k - 1) * W2 + V1**3],
    ]


def combinations(k):
    """Coefficient rows over (e, k1^1, k1^2, k1^3, k2^1, k2^2, k2^3) and scalars."""
    w = W1 ** (k - 1)
    return [
        ([9 * k - 3, 0, -(3 * k - 4), 0, 0, 0, 0], 9),
        ([0, 0, 3 * V1, 0, (9 * k - 3) * w, 0, 0], -9),
        ([0, 2 * V1, 0, 0, W2, -W2, W1], -3),
        ([0, -3 * (k - 1) * w, 0, W1, V1, V1, 0], -3),
        ([0, -3 * (k - 1) * W1 ** (k - 2) * W2, 0, W2, 0, 0, V1], 3),
    ]


def hk_manifest(k):
    g_inv = {V2: V2 + W1 ** (k - 1)}
    dg = Matrix([[diff(c, t) for t in T] for c in [U1, V1, V2 - W1 ** (k - 1), W1, W2]])
    fk_table = lift_fk(k)
    for label, eta, want in zip(LABELS_F, lift_f(), fk_table):
        moved = Matrix([expand(sympify(e).subs(g_inv, simultaneous=True)) for e in eta])
        got = [expand(c) for c in dg * moved]
        if any(expand(a - b) for a, b in zip(got, want)):
            fail(f"k={k}: transported {label} disagrees with the closed form")
    five = lift_hk(k)
    for i, (coeffs, scalar) in enumerate(combinations(k)):
        comb = [expand(sum(c * g[j] for c, g in zip(coeffs, fk_table))) for j in range(5)]
        proj = [expand(comb[j].subs({U1: 0, V2: 0})) for j in (1, 3, 4)]
        if any(expand(p - scalar * q) for p, q in zip(proj, five[i])):
            fail(f"k={k}: combination {i + 1} is not {scalar} times generator {i + 1}")

    hk = [x, y**3, y ** (3 * k - 1) + x * y]
    fk = [u1, v1, v2, y**3 + u1 * y, v1 * y + v2 * y**2 + y**2 * (y**3 + u1 * y) ** (k - 1)]
    return {
        "schema": SCHEMA,
        "description": f"The family H_k at k = {k}: the unfolding F, the change G_k, the transported "
                       f"Lift(F_k) table, the five generators of Lift(H_k) and the combinations relating them.",
        "rings": {
            "HSrc": {"vars": ["x", "y"], "weights": [3 * k - 2, 1]},
            "HTgt": {"vars": ["V1", "W1", "W2"], "weights": [3 * k - 2, 3, 3 * k - 1]},
            "FSrc": {"vars": ["u1", "v1", "v2", "y"], "weights": [2, 2, 1, 1]},
            "FTgt": {"vars": ["U1", "V1", "V2", "W1", "W2"], "weights": [2, 2, 1, 3, 3]},
            "FkSrc": {"vars": ["u1", "v1", "v2", "y"], "weights": [2, 3 * k - 2, 3 * k - 3, 1]},
            "FkTgt": {"vars": ["U1", "V1", "V2", "W1", "W2"], "weights": [2, 3 * k - 2, 3 * k - 3, 3, 3 * k - 1]},
        },
        "maps": {
            f"H{k}": {"source": "HSrc", "target": "HTgt", "components": field(hk)},
            "F": {"source": "FSrc", "target": "FTgt",
                  "components": field([u1, v1, v2, y**3 + u1 * y, v1 * y + v2 * y**2])},
            f"F{k}": {"source": "FkSrc", "target": "FkTgt", "components": field(fk)},
            f"G{k}": {"source": "FTgt", "target": "FkTgt",
                      "components": field([U1, V1, V2 - W1 ** (k - 1), W1, W2])},
            f"G{k}_inv": {"source": "FkTgt", "target": "FTgt",
                          "components": field([U1, V1, V2 + W1 ** (k - 1), W1, W2])},
        },
        "unfoldings": {
            f"F{k}u": {"map": f"F{k}", "core": f"H{k}", "source_params": ["u1", "v2"],
                       "target_params": ["U1", "V2"]},
        },
        "fields": {
            "lift_F": {"ring": "FTgt", "labels": LABELS_F, "generators": [field(g) for g in lift_f()]},
            f"lift_F{k}": {"ring": "FkTgt", "labels": LABELS_F, "generators": [field(g) for g in fk_table]},
            f"lift_H{k}": {"ring": "HTgt", "generators": [field(g) for g in five]},
            "bogus_constant": {"ring": "HTgt", "generators": [["1", "0", "0"]]},
        },
        "combinations": {
            f"remark_H{k}": {
                "unfolding": f"F{k}u", "fields": f"lift_F{k}", "expect": f"lift_H{k}",
                "rows": [{"coefficients": field(c), "scalar": str(s)} for c, s in combinations(k)],
            },
        },
        "tasks": [
            {"id": "lift_H", "op": "lift-check", "map": f"H{k}", "fields": f"lift_H{k}"},
            {"id": "transport", "op": "transport", "fields": "lift_F", "map": f"G{k}", "inverse": f"G{k}_inv",
             "expect": f"lift_F{k}"},
            {"id": "remark", "op": "combination", "combination": f"remark_H{k}"},
            {"id": "lift_F", "op": "lift-check", "map": "F", "fields": "lift_F"},
            {"id": "lift_Fk", "op": "lift-check", "map": f"F{k}", "fields": f"lift_F{k}"},
            {"id": "pipeline", "op": "from-unfolding", "unfolding": f"F{k}u", "fields": f"lift_F{k}",
             "expect": f"lift_H{k}"},
            {"id": "direct_H", "op": "lift-direct", "map": f"H{k}", "expect": f"lift_H{k}"},
        ],
    }


H = 256 * X**3 + 27 * Y**4 + 144 * X * Y**2 * Z + 128 * X**2 * Z**2 + 4 * Y**2 * Z**3 + 16 * X * Z**4
ETAS = [
    [4 * X, 3 * Y, 2 * Z],
    [-(9 * Y**2 + 16 * X * Z), 12 * Y * Z, 48 * X + 4 * Z**2],
    [Y * Z, -(8 * X + 2 * Z**2), 6 * Y],
]
KMAX = 5


def etas_tilde(k):
    return [
        [4 * k * X, 3 * k * Y, 2 * Z],
        [-(9 * k * Y**2 * Z ** (k - 1) + 16 * k * X * Z ** (2 * k - 1)), 12 * k * Y * Z ** (2 * k - 1),
         48 * X + 4 * Z ** (2 * k)],
        [k * Y * Z ** (2 * k - 1), -(8 * k * X * Z ** (k - 1) + 2 * k * Z ** (3 * k - 1)), 6 * Y],
        [-(9 * k * Y**3 + 24 * k * X * Y * Z**k), 64 * k * X**2 + 12 * k * Y**2 * Z**k + 16 * k * X * Z ** (2 * k),
         4 * Y * Z ** (k + 1)],
    ]


def recipes(k):
    return [
        ("tilde_div", [k, 0, 0]),
        ("tilde", [0, 1, 0]),
        ("tilde", [0, 0, 1]),
        ("tilde_div", [0, k * Y, -8 * k * X]),
    ]


def apply(eta, h):
    return expand(sum(a * diff(h, v) for a, v in zip(eta, (X, Y, Z))))


def transform(eta, k, mode):
    moved = [expand(sympify(e).subs(Z, Z**k)) for e in eta]
    dphi = k * Z ** (k - 1)
    if mode == "tilde":
        return [expand(moved[0] * dphi), expand(moved[1] * dphi), moved[2]]
    return [moved[0], moved[1], cancel(moved[2] / dphi)]


def augment_manifest():
    for eta in ETAS:
        q, r = div(apply(eta, H), H, X, Y, Z)
        if r != 0:
            fail("an eta is not logarithmic along H")
    rings = {
        "fSrc": {"vars": ["x", "y"], "weights": [1, 3]},
        "fTgt": {"vars": ["X", "Y"], "weights": [4, 3]},
        "FSrc": {"vars": ["x", "y", "z"], "weights": [1, 3, 2]},
        "FTgt": {"vars": ["X", "Y", "Z"], "weights": [4, 3, 2]},
    }
    fields = {"etas": {"ring": "FTgt", "generators": [field(g) for g in ETAS]},
              "euler": {"ring": "FTgt", "generators": [field(ETAS[0])]}}
    divisors = {"H": {"ring": "FTgt", "equation": txt(H)},
                "Hf": {"ring": "fTgt", "equation": txt(expand(H.subs(Z, 0)))}}
    instances = []
    for k in range(1, KMAX + 1):
        ring = f"A{k}Tgt"
        rings[ring] = {"vars": ["X", "Y", "Z"], "weights": [4 * k, 3 * k, 2]}
        h = expand(H.subs(Z, Z**k))
        divisors[f"h{k}"] = {"ring": ring, "equation": txt(h)}
        want = etas_tilde(k)
        for i, ((mode, coeffs), target) in enumerate(zip(recipes(k), want)):
            base = [expand(sum(c * g[j] for c, g in zip(coeffs, ETAS))) for j in range(3)]
            got = transform(base, k, mode)
            if any(expand(a - b) for a, b in zip(got, target)):
                fail(f"k={k}: recipe {i + 1} does not give the listed field")
            q, r = div(apply(target, h), h, X, Y, Z)
            if r != 0:
                fail(f"k={k}: listed field {i + 1} is not logarithmic along h")
        fields[f"etas_tilde_{k}"] = {"ring": ring, "generators": [field(g) for g in want]}
        instances.append({
            "k": k, "expected": f"etas_tilde_{k}",
            "recipes": [{"mode": m, "coefficients": field(c)} for m, c in recipes(k)],
        })
    tasks = [
        {"id": "discriminant", "op": "discriminant", "map": "F", "divisor": "H"},
        {"id": "derlog_H", "op": "derlog", "divisor": "H", "mode": "delta", "expect": "etas"},
        {"id": "euler", "op": "euler", "divisor": "H", "expect": "euler"},
        {"id": "discriminant_f", "op": "discriminant", "map": "f", "divisor": "Hf"},
        {"id": "pipeline_f", "op": "from-unfolding", "unfolding": "Fu", "fields": "etas", "divisor": "Hf"},
        {"id": "derlog_h2", "op": "derlog", "divisor": "h2", "mode": "delta", "expect": "etas_tilde_2"},
    ]
    for k in (2, 3):
        tasks.append({"id": f"tilde_{k}", "op": "augment", "augmentation": "A", "k": k, "check": "tilde"})
    for k in (2, 3):
        tasks.append({"id": f"pi2_{k}", "op": "augment", "augmentation": "A", "k": k, "check": "pi2"})
    for k in (1, 2, 3):
        tasks.append({"id": f"descend_{k}", "op": "augment", "augmentation": "A", "k": k, "check": "descend"})
    return {
        "schema": SCHEMA,
        "description": "The swallowtail F(x,y,z) = (x^4+yx+zx^2, y, z) as a one-parameter unfolding of "
                       "f(x,y) = (x^4+yx, y), its discriminant H, Derlog(H), and the augmentations A^k f.",
        "rings": rings,
        "maps": {
            "f": {"source": "fSrc", "target": "fTgt", "components": ["x^4 + x*y", "y"]},
            "F": {"source": "FSrc", "target": "FTgt", "components": ["x^4 + x*y + x^2*z", "y", "z"]},
        },
        "unfoldings": {"Fu": {"map": "F", "core": "f", "source_params": ["z"], "target_params": ["Z"]}},
        "fields": fields,
        "divisors": divisors,
        "augmentations": {"A": {"unfolding": "Fu", "divisor": "H", "base": "etas", "instances": instances,
                                "pi2": {"ring": "fTgt", "generators": ["X", "Y"]}}},
        "tasks": tasks,
    }


def small_manifest():
    # x^2 + x^3 has a second critical value 4/27, so polynomial liftable
    # fields must also vanish there; locally X d/dX already lifts.
    f = x**2 + x**3
    cubic_global = expand(X * (27 * X - 4))
    _, r = div(expand(cubic_global.subs(X, f)), diff(f, x), x)
    if r != 0:
        fail("X(27X - 4) d/dX does not lift over x^2 + x^3")
    return {
        "schema": SCHEMA,
        "description": "Small germs for smoke tests: the fold, a trivial unfolding, a normal crossing and a non-graded fold.",
        "rings": {
            "s1": {"vars": ["x"], "weights": [1]},
            "t1": {"vars": ["X"], "weights": [2]},
            "s2": {"vars": ["x", "l"], "weights": [1, 2]},
            "t2": {"vars": ["X", "L"], "weights": [2, 2]},
            "plane": {"vars": ["X", "Y"]},
            "s0": {"vars": ["x"]},
            "t0": {"vars": ["X"]},
        },
        "maps": {
            "fold": {"source": "s1", "target": "t1", "components": ["x^2"]},
            "fold_unfolded": {"source": "s2", "target": "t2", "components": ["x^2 + l*x", "l"]},
            "cubic_fold": {"source": "s0", "target": "t0", "components": ["x^2 + x^3"]},
        },
        "unfoldings": {
            "trivial": {"map": "fold", "core": "fold", "source_params": [], "target_params": []},
        },
        "fields": {
            "lift_fold": {"ring": "t1", "generators": [["X"]]},
            "euler_fold": {"ring": "t1", "generators": [["2*X"]]},
            "constant_fold": {"ring": "t1", "generators": [["1"]]},
            "normal_crossing": {"ring": "plane", "generators": [["X", "0"], ["0", "Y"]]},
            "cubic_local": {"ring": "t0", "generators": [["X"]]},
            "cubic_global": {"ring": "t0", "generators": [[txt(cubic_global)]]},
        },
        "divisors": {"XY": {"ring": "plane", "equation": "X*Y"}, "fold_disc": {"ring": "t1", "equation": "X"}},
        "tasks": [
            {"id": "fold_lift", "op": "lift-check", "map": "fold", "fields": "euler_fold"},
            {"id": "fold_trivial", "op": "from-unfolding", "unfolding": "trivial", "fields": "lift_fold",
             "expect": "lift_fold"},
            {"id": "fold_direct", "op": "lift-direct", "map": "fold", "expect": "lift_fold"},
            {"id": "fold_disc", "op": "discriminant", "map": "fold", "divisor": "fold_disc"},
            {"id": "xy_delta", "op": "derlog", "divisor": "XY", "mode": "delta", "expect": "normal_crossing"},
            {"id": "xy_strict", "op": "derlog", "divisor": "XY", "mode": "strict"},
            {"id": "cubic_global", "op": "lift-check", "map": "cubic_fold", "fields": "cubic_global"},
            {"id": "cubic_local", "op": "lift-check", "map": "cubic_fold", "fields": "cubic_local"},
            {"id": "cubic_direct", "op": "lift-direct", "map": "cubic_fold", "expect": "cubic_global"},
        ],
    }


def write(name, manifest):
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / name).write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {OUT / name}")


def main():
    write("hk.manifest", hk_manifest(2))
    for k in (3, 4, 5):
        write(f"hk{k}.manifest", hk_manifest(k))
    write("augment.manifest", augment_manifest())
    write("small.manifest", small_manifest())


if __name__ == "__main__":
    main()
