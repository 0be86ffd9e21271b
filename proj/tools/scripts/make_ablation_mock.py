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

"""Builds the ablation demo corpus and its mock dictionary.

Usage: make_ablation_mock.py data/demo/ablation_parallel.tsv \
           data/function_words.tsv data/demo

Writes ablation_corpus.txt (source side) and ablation_mock.tsv, which maps
every source sentence and every single-word ablation of it to an English
output. Deleting 的 loses possessive structure, deleting 和 or 在 changes one
connective, and any other deletion leaves the translation as it was.
"""

import os
import re
import sys

POSSESSIVES = {"my", "her", "his", "our", "their", "your"}


def degrade_de(en):
    words = en.split(" ")
    out = []
    for w in words:
        if w.lower() in POSSESSIVES:
            continue
        out.append(re.sub(r"'s\b", "", w))
    text = " ".join(out)
    text = text.replace(" of the ", " ").replace(" to the ", " ")
    if text == en:
        words = en.split(" ")
        if len(words) >= 2:
            words[0], words[1] = words[1], words[0]
        text = " ".join(words)
    return text


def degrade_he(en):
    return en.replace(" and ", " with ", 1)


def degrade_zai(en):
    for prep in (" in ", " at ", " on ", " by "):
        if prep in en:
            return en.replace(prep, " ", 1)
    return en


RULES = {"的": degrade_de, "和": degrade_he, "在": degrade_zai}


def main():
    parallel, wordlist, out_dir = sys.argv[1:4]
    pairs = []
    for line in open(parallel, encoding="utf-8"):
        if line.startswith("#") or not line.strip():
            continue
        zh, en = line.rstrip("\n").split("\t")
        pairs.append((zh, en))
    words = [l.split("\t")[0] for l in open(wordlist, encoding="utf-8")
             if l.strip() and not l.startswith("#")]
    mock = {}

    def put(zh, en):
        assert mock.get(zh, en) == en, zh
        mock[zh] = en

    for zh, en in pairs:
        put(zh, en)
    for w in words:
        rule = RULES.get(w, lambda en: en)
        for zh, en in pairs:
            if w in zh:
                put(zh.replace(w, ""), rule(en))
    with open(os.path.join(out_dir, "ablation_corpus.txt"), "w",
              encoding="utf-8") as f:
        for zh, _ in pairs:
            f.write(zh + "\n")
    with open(os.path.join(out_dir, "ablation_mock.tsv"), "w",
              encoding="utf-8") as f:
        f.write("# Generated by tools/scripts/make_ablation_mock.py.\n")
        for zh, en in mock.items():
            f.write(f"{zh}\t{en}\n")
    print(f"{len(pairs)} sentences, {len(mock)} mock entries",
          file=sys.stderr)


if __name__ == "__main__":
    main()
