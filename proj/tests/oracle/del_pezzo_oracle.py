#!/usr/bin/env python3
"""Independent oracle for the number of classes E = dL - sum m_i E_i with
E.E = -1 and c1(E) = 1 on the k-fold blow-up of CP^2.

Counting is done by dynamic programming over coordinates on the state
(sum m_i, sum m_i^2) inside the box |d| <= B, |m_i| <= B; B is grown until
the count is stable. Writes del_pezzo_counts.json next to this file.
"""
import json
import os
from collections import Counter


def count_in_box(k, box):
    total = 0
    for d in range(-box, box + 1):
        target_sum = 3 * d - 1
        target_sq = d * d + 1
        states = Counter({(0, 0): 1})
        for _ in range(k):
            nxt = Counter()
            for (s, q), c in states.items():
                for m in range(-box, box + 1):
                    q2 = q + m * m
                    if q2 > target_sq:
                        continue
                    nxt[(s + m, q2)] += c
            states = nxt
        total += states.get((target_sum, target_sq), 0)
    return total


def stable_count(k):
    box, prev = 4, None
    while True:
        cur = count_in_box(k, box)
        if cur == prev:
            return cur, box
        prev, box = cur, box + 4


def main():
    out = {}
    for k in range(1, 9):
        count, box = stable_count(k)
        out[str(k)] = {"count": count, "stable_box": box}
        print(k, count, box)
    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "del_pezzo_counts.json")
    with open(path, "w") as f:
        json.dump(out, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
