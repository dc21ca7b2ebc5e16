/** Inference: a word's predicted class is the argmax of the summed
 * probability distributions of its sub-tokens. */

import { Checkpoint, forward } from "./model.js";
import { Tokenizer, isPunctuation } from "./tokenizer.js";
import { EmptyInput, PreparedSentence } from "./types.js";

/** Sum per-token distributions over each word span, then argmax.
 * Returns one class per word; masked (punctuation) words get -1. */
export function wordPredictions(
  probs: Float64Array,
  numClasses: number,
  sentence: PreparedSentence
): number[] {
  const out: number[] = [];
  sentence.wordSpans.forEach(([start, end], w) => {
    if (sentence.wordLabels[w] < 0 && isPunctuation(sentence.words[w])) {
      out.push(-1);
      return;
    }
    const summed = new Float64Array(numClasses);
    for (let t = start; t < end; t++) {
      for (let c = 0; c < numClasses; c++) summed[c] += probs[t * numClasses + c];
    }
    let best = 0;
    for (let c = 1; c < numClasses; c++) if (summed[c] > summed[best]) best = c;
    out.push(best);
  });
  return out;
}

export function sumThenArgmax(distributions: number[][]): number {
  if (!distributions.length) throw new EmptyInput("no distributions to sum");
  const k = distributions[0].length;
  const summed = new Array(k).fill(0);
  for (const dist of distributions) {
    for (let c = 0; c < k; c++) summed[c] += dist[c];
  }
  let best = 0;
  for (let c = 1; c < k; c++) if (summed[c] > summed[best]) best = c;
  return best;
}

export interface Prediction {
  text: string;
  pred: number[];
}

/** Predict pattern ids for whitespace-tokenized sentences; punctuation-only
 * words are skipped, matching the exporter's labeling. */
export function predictSentences(checkpoint: Checkpoint, sentences: string[]): Prediction[] {
  if (!sentences.length) throw new EmptyInput("no sentences");
  const tokenizer = Tokenizer.fromJSON(checkpoint.pieces);
  const out: Prediction[] = [];
  for (const text of sentences) {
    const words = text.split(/\s+/).filter((w) => w.length > 0);
    const content = words.filter((w) => !isPunctuation(w));
    const tokenIds: number[] = [];
    const spans: [number, number][] = [];
    for (const word of content) {
      const start = tokenIds.length;
      tokenIds.push(...tokenizer.encodeWord(word));
      spans.push([start, tokenIds.length]);
    }
    if (!tokenIds.length) {
      out.push({ text, pred: [] });
      continue;
    }
    const cache = forward(checkpoint.encoder, checkpoint.head, tokenIds);
    const k = checkpoint.head.numClasses;
    const pred = spans.map(([start, end]) => {
      const summed = new Float64Array(k);
      for (let t = start; t < end; t++) {
        for (let c = 0; c < k; c++) summed[c] += cache.probs[t * k + c];
      }
      let best = 0;
      for (let c = 1; c < k; c++) if (summed[c] > summed[best]) best = c;
      return best;
    });
    out.push({ text, pred });
  }
  return out;
}
