/** Synthetic separable corpus in the exported-dataset format: every word
 * type deterministically encodes its pattern label through its suffix, so a
 * text-only model can in principle reach perfect word accuracy. */

import { Rng } from "./rng.js";
import { DatasetLine } from "./types.js";

const ONSETS = ["b", "d", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v"];
const VOWELS = ["a", "e", "i", "o", "u"];
const SUFFIX = ["ta", "re", "mo", "li"]; // one per class, k = 4

export function makeSeparableCorpus(
  sentences = 200,
  k = 4,
  seed = 99
): DatasetLine[] {
  const rng = new Rng(seed);
  const wordTypes: [string, number][] = [];
  for (let i = 0; i < 36; i++) {
    const label = i % k;
    const stem =
      ONSETS[rng.int(ONSETS.length)] +
      VOWELS[rng.int(VOWELS.length)] +
      ONSETS[rng.int(ONSETS.length)] +
      VOWELS[rng.int(VOWELS.length)];
    wordTypes.push([stem + SUFFIX[label], label]);
  }
  const lines: DatasetLine[] = [];
  for (let s = 0; s < sentences; s++) {
    const n = 5 + rng.int(5);
    const labels: [string, number, number][] = [];
    for (let w = 0; w < n; w++) {
      const [word, label] = wordTypes[rng.int(wordTypes.length)];
      labels.push([word, label, label % 3]);
    }
    const words = labels.map(([w]) => w);
    if (s % 7 === 0) {
      labels.push([".", 0, 0]); // exporter keeps no punctuation, but stay robust
      words.push(".");
    }
    lines.push({ text: words.join(" "), labels });
  }
  return lines;
}
