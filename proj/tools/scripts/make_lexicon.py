#!/usr/bin/env python3
# Copyright 2026 The dekit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds data/lexicon.tsv from a jieba dict.txt.

Usage: make_lexicon.py path/to/jieba/dict.txt data/lexicon.tsv [--size N]

Keeps the N most frequent all-Han entries, maps jieba's tags onto the dekit
tagset and drops multi-character words containing the particle 的.
"""

import argparse
import sys

TAG_MAP = {
    "nrt": ["nr"], "nrfg": ["nr"], "vn": ["v", "n"], "vg": ["v"],
    "vd": ["v"], "vi": ["v"], "vq": ["v"], "ad": ["a"], "ag": ["a"],
    "an": ["n", "a"], "mq": ["m"], "mg": ["m"], "tg": ["t"], "dg": ["d"],
    "df": ["d"], "rr": ["r"], "rz": ["r"], "rg": ["r"], "zg": ["z"],
}
KEEP = set("n nr ns nt nz ng v a d p c m q r x t f s b i l j y e o z k h g "
           "u ud ug uj ul uv uz".split())
PARTICLE = "的"


def is_han(text):
    return all(0x4E00 <= ord(c) <= 0x9FFF for c in text)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("dict_txt")
    parser.add_argument("out")
    parser.add_argument("--size", type=int, default=20000)
    args = parser.parse_args()

    rows = []
    with open(args.dict_txt, encoding="utf-8") as f:
        for line in f:
            parts = line.split()
            if len(parts) != 3:
                continue
            word, freq, tag = parts[0], int(parts[1]), parts[2]
            if not is_han(word) or freq <= 0:
                continue
            if len(word) > 1 and PARTICLE in word:
                continue
            tags = [t for t in TAG_MAP.get(tag, [tag]) if t in KEEP]
            if not tags:
                continue
            rows.append((word, freq, tags))
    rows.sort(key=lambda r: (-r[1], r[0]))
    rows = rows[:args.size]
    with open(args.out, "w", encoding="utf-8") as out:
        out.write("# surface<TAB>frequency<TAB>tags\n")
        out.write("# Derived from jieba 0.42.1 dict.txt (MIT License); see "
                  "data/NOTICE.\n")
        for word, freq, tags in rows:
            out.write(f"{word}\t{freq}\t{','.join(tags)}\n")
    print(f"wrote {len(rows)} entries to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
