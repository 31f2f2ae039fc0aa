#!/usr/bin/env python3
"""Brute-force coupled similarities for the four-movie fixture.

Everything is computed with exact fractions straight from the set
definitions, without any of the library's indexing. Run with --write to
regenerate table1_expected.json, or --check to compare against it.
"""
import argparse
import itertools
import json
import sys
from fractions import Fraction
from pathlib import Path

HERE = Path(__file__).resolve().parent
ITEMS = HERE.parent.parent / "data" / "table1" / "items.tsv"
EXPECTED = HERE / "table1_expected.json"


def read_items(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split("\t")
    rows = [line.split("\t") for line in lines[1:] if line]
    return header[1:], [(r[0], r[1:]) for r in rows]


def g(items, j, x):
    return {name for name, vals in items if vals[j] == x}


def values(items, j):
    return sorted({vals[j] for _, vals in items})


def iaavs(items, j, x, y):
    a, b = len(g(items, j, x)), len(g(items, j, y))
    return Fraction(a * b, a + b + a * b)


def cond(items, k, j, w, x):
    gx = g(items, j, x)
    both = {name for name, vals in items if vals[k] == w} & gx
    return Fraction(len(both), len(gx))


def irs(items, j, k, x, y):
    return sum((min(cond(items, k, j, w, x), cond(items, k, j, w, y)) for w in values(items, k)), Fraction(0))


def ieavs(items, nattr, j, x, y):
    others = [k for k in range(nattr) if k != j]
    if not others:
        return Fraction(1)
    return sum((Fraction(1, len(others)) * irs(items, j, k, x, y) for k in others), Fraction(0))


def compute():
    attrs, items = read_items(ITEMS)
    out = {"attributes": attrs, "values": [], "items": []}
    for j, name in enumerate(attrs):
        for x, y in itertools.combinations_with_replacement(values(items, j), 2):
            ia = iaavs(items, j, x, y)
            ie = ieavs(items, len(attrs), j, x, y)
            entry = {"attribute": name, "x": x, "y": y, "iaavs": float(ia), "ieavs": float(ie),
                     "cavs": float(ia * ie), "exact_cavs": str(ia * ie), "irs": {}}
            for k, other in enumerate(attrs):
                if k != j:
                    entry["irs"][other] = float(irs(items, j, k, x, y))
            out["values"].append(entry)
    for (a, va), (b, vb) in itertools.combinations(items, 2):
        cis = sum((iaavs(items, j, va[j], vb[j]) * ieavs(items, len(attrs), j, va[j], vb[j])
                   for j in range(len(attrs))), Fraction(0))
        out["items"].append({"a": a, "b": b, "cis": float(cis), "exact": str(cis)})
    return out


def main():
    parser = argparse.ArgumentParser()
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--write", action="store_true")
    group.add_argument("--check", action="store_true")
    args = parser.parse_args()
    result = compute()
    if args.write:
        EXPECTED.write_text(json.dumps(result, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        return 0
    frozen = json.loads(EXPECTED.read_text(encoding="utf-8"))
    if frozen != result:
        print("table1_expected.json is out of date with the oracle", file=sys.stderr)
        return 1
    gf = next(p for p in result["items"] if {p["a"], p["b"]} == {"God Father", "Good Fellas"})
    if gf["exact"] != "4/3":
        print("cis(God Father, Good Fellas) = %s, expected 4/3" % gf["exact"], file=sys.stderr)
        return 1
    print("oracle matches frozen values (%d value pairs, %d item pairs)" % (len(result["values"]), len(result["items"])))
    return 0


if __name__ == "__main__":
    sys.exit(main())
