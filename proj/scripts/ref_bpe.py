#!/usr/bin/env python3
"""Minimal reference BPE encoder over a .tiktoken vocabulary file.

Independent cross-check for tests/data/tokenizer_vectors.json: implements the
cl100k_base pretokenizer split (via the `regex` module) and rank-based merging
directly from the published data file, sharing no code with the C++ tree or
with js-tiktoken.

Usage:
  python3 scripts/ref_bpe.py data/cl100k_base.tiktoken tests/data/tokenizer_vectors.json
prints PASS/FAIL per vector and exits non-zero on any mismatch.
"""

import base64
import json
import sys

import regex

PAT = regex.compile(
    r"""'(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}+|\p{N}{1,3}"""
    r"""| ?[^\s\p{L}\p{N}]++[\r\n]*|\s*[\r\n]|\s+(?!\S)|\s+""",
    regex.V1,
)


def load_ranks(path):
    ranks = {}
    with open(path, "rb") as fh:
        for line in fh:
            if not line.strip():
                continue
            b64, rank = line.split()
            ranks[base64.b64decode(b64)] = int(rank)
    return ranks


def bpe_merge(piece: bytes, ranks) -> list[int]:
    if piece in ranks:
        return [ranks[piece]]
    parts = [piece[i:i + 1] for i in range(len(piece))]
    while len(parts) > 1:
        best_rank = None
        best_i = None
        for i in range(len(parts) - 1):
            r = ranks.get(parts[i] + parts[i + 1])
            if r is not None and (best_rank is None or r < best_rank):
                best_rank, best_i = r, i
        if best_i is None:
            break
        parts[best_i:best_i + 2] = [parts[best_i] + parts[best_i + 1]]
    return [ranks[p] for p in parts]


def encode(text: str, ranks) -> list[int]:
    ids = []
    for piece in PAT.findall(text):
        ids.extend(bpe_merge(piece.encode("utf-8"), ranks))
    return ids


def main():
    ranks = load_ranks(sys.argv[1])
    vectors = json.load(open(sys.argv[2]))
    failures = 0
    for i, vec in enumerate(vectors):
        got = encode(vec["text"], ranks)
        ok = got == vec["ids"]
        if not ok:
            failures += 1
            print(f"FAIL [{i}] {vec['text']!r}\n  expected {vec['ids']}\n  got      {got}")
    print(f"{len(vectors) - failures}/{len(vectors)} vectors match")
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
