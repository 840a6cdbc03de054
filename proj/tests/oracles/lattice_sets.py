#!/usr/bin/env python3
"""Writes the D4 (24 vectors) and doubled E8 (240 vectors) kissing sets."""
import itertools
import json
import sys


def d4():
    out = []
    for i, j in itertools.combinations(range(4), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * 4
            v[i], v[j] = si, sj
            out.append(v)
    return out


def e8_doubled():
    out = []
    for i, j in itertools.combinations(range(8), 2):
        for si, sj in itertools.product((2, -2), repeat=2):
            v = [0] * 8
            v[i], v[j] = si, sj
            out.append(v)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            out.append(list(signs))
    return out


def check(vectors):
    norm = sum(x * x for x in vectors[0])
    assert all(sum(x * x for x in v) == norm for v in vectors)
    for a, b in itertools.combinations(vectors, 2):
        assert sum((x - y) ** 2 for x, y in zip(a, b)) >= norm
    return norm


if __name__ == "__main__":
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "."
    for name, vecs, expected in (("kissing_d4.json", d4(), 24), ("kissing_e8_doubled.json", e8_doubled(), 240)):
        assert len(vecs) == expected
        norm = check(vecs)
        with open(f"{out_dir}/{name}", "w") as f:
            json.dump({"norm": norm, "vectors": vecs}, f)
            f.write("\n")
        print(name, len(vecs), "vectors, squared norm", norm)
