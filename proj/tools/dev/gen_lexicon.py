#!/usr/bin/env python3
# Copyright 2026 The vmh Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates data/lexicon.tsv.

Usage: gen_lexicon.py BRILL_LEXICON FREQUENCY_LIST OUT [TEXT_FILES...]

BRILL_LEXICON is the "word TAG" lexicon distributed with Brill's tagger
(e.g. en-lexicon.txt from the pattern3 sdist), FREQUENCY_LIST is
"word weight" ordered by frequency. Every word that occurs in TEXT_FILES
is added on top of the frequency cut so bundled fixtures are covered.
"""
import re
import sys

TOP_N = 5000
WORD = re.compile(r"^[a-z][a-z'-]*$")


def main():
    lex_path, freq_path, out_path, *texts = sys.argv[1:]
    tags = {}
    for line in open(lex_path, encoding="utf-8"):
        if line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) != 2:
            continue
        word, tag = parts
        low = word.lower()
        if word == low or low not in tags:
            tags[low] = tag

    chosen = []
    seen = set()
    for line in open(freq_path, encoding="utf-8"):
        w = line.split()[0].lower()
        if w in seen or not WORD.match(w) or w not in tags:
            continue
        seen.add(w)
        chosen.append(w)
        if len(chosen) >= TOP_N:
            break

    for path in texts:
        for tok in re.findall(r"[A-Za-z][A-Za-z'-]*", open(path, encoding="utf-8").read()):
            w = tok.lower()
            if w not in seen and w in tags:
                seen.add(w)
                chosen.append(w)

    with open(out_path, "w", encoding="utf-8") as f:
        f.write("# word<TAB>Penn tag (most frequent). Derived from Brill's tagger lexicon\n")
        f.write("# (Copyright 1993 MIT and University of Pennsylvania, MIT license).\n")
        for w in sorted(chosen):
            f.write(f"{w}\t{tags[w]}\n")


if __name__ == "__main__":
    main()
