#!/usr/bin/env python3
"""Regenerate fixtures/multipliers.json with the obddlab multiplier search.

For each modulus the smallest t meeting the 1/3 target is stored; when no
t up to the cap meets it, the best set found at the cap is stored with
target_met = false.
"""
import argparse
import json
import math
import subprocess


def search(binary, modulus, t):
    out = subprocess.run(
        [binary, "multipliers", "--modulus", str(modulus), "--t", str(t)],
        capture_output=True, text=True)
    if out.returncode not in (0, 1):
        raise SystemExit(out.stderr)
    return json.loads(out.stdout)


def entry(binary, modulus, t_cap):
    for t in range(1, t_cap + 1):
        res = search(binary, modulus, t)
        if res["found"]:
            break
    return {
        "modulus": modulus,
        "multipliers": res["multipliers"],
        "worst_error": res["worst_error"],
        "target": 1.0 / 3.0,
        "target_met": res["found"],
        "exhaustive": res["exhaustive"],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--binary", default="build/tools/obddlab")
    ap.add_argument("--out", default="fixtures/multipliers.json")
    args = ap.parse_args()

    eq = []
    for q, cap in ((2, 4), (4, 4), (8, 8)):
        e = entry(args.binary, 2 ** (q // 2), cap)
        eq.append({"q": q, **e})
    modp = []
    for p in (2, 3, 5, 7, 11, 13):
        e = entry(args.binary, p, 4 * max(1, math.ceil(math.log2(p))))
        modp.append({"p": p, **e})
    with open(args.out, "w") as f:
        json.dump({"eq": eq, "modp": modp}, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
