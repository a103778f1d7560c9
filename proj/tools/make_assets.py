#!/usr/bin/env python3
# Copyright 2026 The ste-forge Authors
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

"""Regenerates the small bundled test corpus under assets/.

Backgrounds are procedural textures (gradients, stripes, noise, blotches) so
the repo carries no third-party photographs. The lexicon is harvested from
docstrings of the Python standard library, which keeps it plain English.
"""

import argparse
import collections
import pathlib
import re
import sysconfig

import numpy as np
from PIL import Image


def smooth_noise(rng, h, w, scale):
    gh, gw = max(2, h // scale + 2), max(2, w // scale + 2)
    grid = rng.random((gh, gw, 3))
    img = Image.fromarray((grid * 255).astype(np.uint8)).resize((w, h), Image.BICUBIC)
    return np.asarray(img, dtype=np.float64) / 255.0


def background(rng, kind, h, w):
    yy, xx = np.mgrid[0:h, 0:w]
    base = rng.random(3)
    if kind == 0:  # linear gradient
        c2 = rng.random(3)
        t = (xx / max(1, w - 1))[..., None]
        img = base * (1 - t) + c2 * t
    elif kind == 1:  # stripes
        period = rng.integers(6, 30)
        c2 = rng.random(3)
        t = ((np.sin(2 * np.pi * (xx + yy * rng.uniform(-1, 1)) / period) + 1) / 2)[..., None]
        img = base * (1 - t) + c2 * t
    elif kind == 2:  # smooth noise
        img = 0.5 * base + 0.5 * smooth_noise(rng, h, w, int(rng.integers(8, 40)))
    else:  # blotches over a flat tone with grain
        img = np.broadcast_to(base, (h, w, 3)).copy()
        for _ in range(int(rng.integers(3, 9))):
            cy, cx = rng.uniform(0, h), rng.uniform(0, w)
            r = rng.uniform(6, 40)
            m = (((yy - cy) ** 2 + (xx - cx) ** 2) < r * r)[..., None]
            img = np.where(m, rng.random(3), img)
        img = img + rng.normal(0, 0.03, img.shape)
    return np.clip(img, 0, 1)


def harvest_words(limit):
    stdlib = pathlib.Path(sysconfig.get_paths()["stdlib"])
    counts = collections.Counter()
    for path in sorted(stdlib.glob("*.py")):
        text = path.read_text(errors="ignore")
        for doc in re.findall(r'"""(.*?)"""', text, flags=re.S):
            for word in re.findall(r"\b[A-Za-z]{3,10}\b", doc):
                counts[word.lower()] += 1
    words = [w for w, _ in counts.most_common(limit)]
    return sorted(words)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "assets"))
    parser.add_argument("--backgrounds", type=int, default=24)
    parser.add_argument("--words", type=int, default=2000)
    args = parser.parse_args()

    out = pathlib.Path(args.out)
    (out / "backgrounds").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20231015)
    sizes = [(64, 256), (96, 320), (128, 384), (80, 300)]
    for i in range(args.backgrounds):
        h, w = sizes[i % len(sizes)]
        img = background(rng, i % 4, h, w)
        Image.fromarray((img * 255 + 0.5).astype(np.uint8)).save(out / "backgrounds" / f"bg_{i:03d}.png")

    words = harvest_words(args.words)
    (out / "lexicon.txt").write_text("\n".join(words) + "\n")


if __name__ == "__main__":
    main()
