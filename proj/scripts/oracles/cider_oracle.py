#!/usr/bin/env python3
# Copyright (c) 2026 The shotad authors
# SPDX-License-Identifier: Apache-2.0
"""Reference CIDEr-D scorer for the frozen toy-corpus constants.

Written directly from the metric's published formulation (tf-idf n-gram
vectors, clipped cosine per n, gaussian length penalty, the bigram-token
length convention) so the C++ implementation is checked against an
independent derivation. Prints the per-item and corpus values frozen into
the evaluation tests.
"""

import math
from collections import defaultdict

MAX_N = 4
SIGMA = 6.0

REFS = {
    "ad1": "a man walks into the room",
    "ad2": "she opens the old wooden door",
    "ad3": "the dog runs across the yard",
    "ad4": "he holds the letter and smiles",
}
PREDS = {
    "ad1": "a man walks into the room",
    "ad2": "she opens a door quickly",
    "ad3": "the cat sleeps on the floor",
    "ad4": "zebra quantum flux",
}


def ngram_counts(text):
    words = text.lower().split()
    counts = defaultdict(int)
    for n in range(1, MAX_N + 1):
        for i in range(len(words) - n + 1):
            counts[tuple(words[i:i + n])] += 1
    return counts


def document_frequency(refs):
    df = defaultdict(int)
    for text in refs.values():
        for ngram in set(ngram_counts(text)):
            df[ngram] += 1
    return df


def counts_to_vec(counts, df, ref_len):
    vec = [defaultdict(float) for _ in range(MAX_N)]
    norm = [0.0] * MAX_N
    length = 0
    for ngram, tf in counts.items():
        n = len(ngram) - 1
        idf = ref_len - math.log(max(1.0, df[ngram]))
        vec[n][ngram] = tf * idf
        norm[n] += vec[n][ngram] ** 2
        if n == 1:  # length is counted in bigram tokens
            length += tf
    return vec, [math.sqrt(x) for x in norm], length


def sim(vh, vr, nh, nr, lh, lr):
    delta = float(lh - lr)
    vals = []
    for n in range(MAX_N):
        v = 0.0
        for ngram, hval in vh[n].items():
            v += min(hval, vr[n][ngram]) * vr[n][ngram]
        if nh[n] != 0 and nr[n] != 0:
            v /= nh[n] * nr[n]
        v *= math.exp(-(delta ** 2) / (2 * SIGMA ** 2))
        vals.append(v)
    return vals


def main():
    df = document_frequency(REFS)
    ref_len = math.log(len(REFS))
    items = {}
    for ad_id in sorted(REFS):
        vr, nr, lr = counts_to_vec(ngram_counts(REFS[ad_id]), df, ref_len)
        vh, nh, lh = counts_to_vec(ngram_counts(PREDS[ad_id]), df, ref_len)
        vals = sim(vh, vr, nh, nr, lh, lr)
        items[ad_id] = 10.0 * sum(vals) / MAX_N
        print(f"{ad_id}: {items[ad_id]:.12f}")
    corpus = 10.0 * sum(items.values()) / len(items)
    print(f"corpus_x100: {corpus:.12f}")


if __name__ == "__main__":
    main()
