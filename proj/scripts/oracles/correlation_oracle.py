#!/usr/bin/env python3
# Copyright (c) 2026 The shotad authors
# SPDX-License-Identifier: Apache-2.0
"""Pearson and Spearman values for the frozen 10-pair correlation fixture.

Spearman uses fractional (average) ranks for ties, then Pearson over the
ranks. Prints the constants frozen into the evaluation tests.
"""

import math

A = [0.12, 0.45, 0.33, 0.78, 0.45, 0.91, 0.10, 0.66, 0.45, 0.52]
B = [1.0, 2.0, 2.0, 4.0, 3.0, 5.0, 1.0, 4.0, 2.0, 3.0]


def pearson(a, b):
    n = len(a)
    ma = sum(a) / n
    mb = sum(b) / n
    cov = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    va = sum((x - ma) ** 2 for x in a)
    vb = sum((y - mb) ** 2 for y in b)
    return cov / math.sqrt(va * vb)


def average_ranks(values):
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def main():
    print(f"pearson:  {pearson(A, B):.15f}")
    print(f"spearman: {pearson(average_ranks(A), average_ranks(B)):.15f}")


if __name__ == "__main__":
    main()
