/** Build the shipped encoder checkpoint: induce a subword vocabulary from a
 * synthetic text universe and train the encoder on masked-token prediction.
 * Deterministic; rerun with `npm run pretrain` to regenerate
 * pretrained/encoder-mini.json.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import {
  DualGroupAdam,
  backward,
  forward,
  initEncoder,
  initHead,
  zeroGradients,
} from "../src/model.js";
import { Rng } from "../src/rng.js";
import { induceVocab } from "../src/tokenizer.js";

const ONSETS = ["b", "d", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v"];
const VOWELS = ["a", "e", "i", "o", "u"];
const SUFFIX = ["ta", "re", "mo", "li"];

const rng = new Rng(4242);

function pseudoWord(): string {
  const syllables = 1 + rng.int(2);
  let word = "";
  for (let s = 0; s < syllables; s++) {
    word += ONSETS[rng.int(ONSETS.length)] + VOWELS[rng.int(VOWELS.length)];
  }
  if (rng.next() < 0.7) word += SUFFIX[rng.int(SUFFIX.length)];
  return word;
}

const wordTypes = Array.from({ length: 300 }, pseudoWord);
const tokenizer = induceVocab(wordTypes, 512);
console.log(`vocab: ${tokenizer.size} pieces`);

const sentences: number[][] = [];
for (let s = 0; s < 1500; s++) {
  const n = 3 + rng.int(7);
  const ids: number[] = [];
  for (let w = 0; w < n; w++) {
    ids.push(...tokenizer.encodeWord(wordTypes[rng.int(wordTypes.length)]));
  }
  sentences.push(ids);
}

const dEmb = 32;
const dHidden = 64;
const encoder = initEncoder(tokenizer.size, dEmb, dHidden, rng);
const mlmHead = initHead(tokenizer.size, dHidden + dEmb, rng);
const optimizer = new DualGroupAdam(1e-3, 1e-3); // pretraining: one speed

const epochs = 8;
for (let epoch = 1; epoch <= epochs; epoch++) {
  let lossSum = 0;
  let count = 0;
  rng.shuffle(sentences);
  for (const ids of sentences) {
    const masked = ids.slice();
    const labels = new Array<number>(ids.length).fill(-1);
    for (let i = 0; i < ids.length; i++) {
      if (rng.next() < 0.15) {
        labels[i] = ids[i];
        masked[i] = tokenizer.unkId;
      }
    }
    if (labels.every((l) => l < 0)) {
      const i = rng.int(ids.length);
      labels[i] = ids[i];
      masked[i] = tokenizer.unkId;
    }
    const grads = zeroGradients(encoder, mlmHead);
    const cache = forward(encoder, mlmHead, masked);
    const [loss, n] = backward(encoder, mlmHead, cache, labels, grads);
    if (!n) continue;
    const scale = 1 / n;
    for (const g of [grads.emb, grads.w1, grads.b1, grads.w2, grads.b2]) {
      for (let i = 0; i < g.length; i++) g[i] *= scale;
    }
    optimizer.update(encoder, mlmHead, grads);
    lossSum += loss;
    count += n;
  }
  console.log(`epoch ${epoch}: masked-token loss ${(lossSum / count).toFixed(4)}`);
}

const here = dirname(fileURLToPath(import.meta.url));
const outPath = join(here, "..", "..", "pretrained", "encoder-mini.json");
mkdirSync(dirname(outPath), { recursive: true });
writeFileSync(
  outPath,
  JSON.stringify({
    pieces: tokenizer.toJSON(),
    encoder: {
      vocabSize: encoder.vocabSize,
      dEmb: encoder.dEmb,
      dHidden: encoder.dHidden,
      emb: Array.from(encoder.emb),
      w1: Array.from(encoder.w1),
      b1: Array.from(encoder.b1),
    },
  })
);
console.log(`wrote ${outPath}`);
