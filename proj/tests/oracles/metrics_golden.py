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

"""Frozen values for tests/data/metrics_golden.tsv.

Usage: metrics_golden.py tests/data/metrics_golden.tsv
"""

import sys

import metrics_oracle as m


def main():
    pairs = [l.rstrip("\n").split("\t")
             for l in open(sys.argv[1], encoding="utf-8") if l.strip()]
    hyps = [p[0] for p in pairs]
    refs = [p[1] for p in pairs]
    print("corpus_bleu %.12f" % m.bleu(hyps, refs))
    print("corpus_bleu_unsmoothed %.12f" % m.bleu(hyps, refs, smoothing=False))
    print("corpus_bleu_cased %.12f" % m.bleu(hyps, refs, case_fold=False))
    print("corpus_chrf %.12f" % m.chrf(hyps, refs))
    print("corpus_chrf_beta1 %.12f" % m.chrf(hyps, refs, beta=1.0))
    for h, r in pairs:
        print("sentence %.12f %.12f" % (m.bleu([h], [r]), m.chrf([h], [r])))


if __name__ == "__main__":
    main()
