import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { makeSeparableCorpus } from "../src/corpus.js";
import { predictSentences, sumThenArgmax } from "../src/predict.js";
import { loadPretrainedEncoder, trainClassifier } from "../src/train.js";
import { DEFAULT_TRAIN_CONFIG } from "../src/types.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const ENCODER = join(HERE, "..", "pretrained", "encoder-mini.json");

const pretrained = loadPretrainedEncoder(ENCODER);

// per-sentence updates: the pinned head learning rate (1e-3) needs the step
// count, not bigger steps, to converge inside the 5-epoch budget
const CONFIG = { ...DEFAULT_TRAIN_CONFIG, batchSize: 1, encoderCheckpoint: ENCODER };

describe("sum-then-argmax", () => {
  it("matches the hand-computed two-token case", () => {
    // [0.6, 0.4] + [0.1, 0.9] sums to [0.7, 1.3] -> class 1
    expect(sumThenArgmax([[0.6, 0.4], [0.1, 0.9]])).toBe(1);
  });

  it("equals argmax of the mean distribution", () => {
    const dists = [
      [0.2, 0.5, 0.3],
      [0.6, 0.2, 0.2],
      [0.25, 0.35, 0.4],
    ];
    const k = 3;
    const mean = new Array(k).fill(0);
    for (const d of dists) for (let c = 0; c < k; c++) mean[c] += d[c] / dists.length;
    const meanArgmax = mean.indexOf(Math.max(...mean));
    expect(sumThenArgmax(dists)).toBe(meanArgmax);
  });
});

describe("training on the separable corpus", () => {
  const corpus = makeSeparableCorpus(200, 4, 99);
  const result = trainClassifier(corpus, pretrained, CONFIG);
  const last = result.metrics[result.metrics.length - 1];

  it("reaches word accuracy above 0.9 within 5 epochs", () => {
    expect(result.metrics.length).toBeLessThanOrEqual(5);
    expect(last.wordAccuracy).toBeGreaterThan(0.9);
  });

  it("beats the majority baseline by more than 0.3", () => {
    expect(last.wordAccuracy).toBeGreaterThan(last.majorityBaseline + 0.3);
  });

  it("emits a confusion matrix for error analysis", () => {
    expect(result.confusion).toHaveLength(4);
    for (const row of result.confusion) expect(row).toHaveLength(4);
    const total = result.confusion.flat().reduce((a, b) => a + b, 0);
    expect(total).toBeGreaterThan(0);
  });

  it("is deterministic for a fixed seed", () => {
    const again = trainClassifier(corpus, pretrained, CONFIG);
    expect(again.metrics).toEqual(result.metrics);
  });

  it("prediction is a pure function of checkpoint and text", () => {
    const texts = corpus.slice(0, 5).map((l) => l.text);
    const a = predictSentences(result.checkpoint, texts);
    const b = predictSentences(result.checkpoint, texts);
    expect(b).toEqual(a);
    for (let i = 0; i < texts.length; i++) {
      const contentWords = texts[i].split(" ").filter((w) => w !== ".");
      expect(a[i].pred).toHaveLength(contentWords.length);
    }
  });
});

describe("degenerate single-class dataset", () => {
  it("still trains and scores perfectly", () => {
    const corpus = makeSeparableCorpus(40, 1, 5);
    const result = trainClassifier(corpus, pretrained, { ...CONFIG, epochs: 1 });
    const last = result.metrics[result.metrics.length - 1];
    expect(last.wordAccuracy).toBe(1.0);
  });
});
