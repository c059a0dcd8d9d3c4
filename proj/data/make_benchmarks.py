#!/usr/bin/env python3
# Copyright 2026 The MPDT Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the synthetic benchmark CSVs in this directory.

mux6: the 6-input multiplexer (2 address bits select one of 4 data bits),
every input combination listed twice (128 rows).

corral: reconstruction of the CORRAL concept, class = (A0 and A1) or
(B0 and B1), one irrelevant bit and one bit agreeing with the class on 75%
of the rows. All 32 combinations of the first five bits, 5 copies each
(160 rows). This is NOT the original corral file; drop the real one in place
of corral.csv to use it.
"""
import csv
import itertools
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent


def mux6():
    rows = []
    for _ in range(2):
        for bits in itertools.product([0, 1], repeat=6):
            a0, a1, *data = bits
            rows.append(list(bits) + [data[2 * a0 + a1]])
    return ["A0", "A1", "D0", "D1", "D2", "D3", "class"], rows


def corral():
    rng = random.Random(1994)
    base = []
    for _ in range(5):
        for a0, a1, b0, b1, irr in itertools.product([0, 1], repeat=5):
            base.append([a0, a1, b0, b1, irr, int((a0 and a1) or (b0 and b1))])
    flipped = set(rng.sample(range(len(base)), len(base) // 4))
    rows = []
    for i, (a0, a1, b0, b1, irr, cls) in enumerate(base):
        corr = 1 - cls if i in flipped else cls
        rows.append([a0, a1, b0, b1, irr, corr, cls])
    header = ["A0", "A1", "B0", "B1", "Irrelevant", "Correlated", "class"]
    return header, rows


def write(name, header, rows):
    with open(HERE / name, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


if __name__ == "__main__":
    write("mux6.csv", *mux6())
    write("corral.csv", *corral())
