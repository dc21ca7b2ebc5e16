/** Fine-tuning loop: pretrained encoder (slow group) + fresh head (fast
 * group), cross-entropy on sub-token labels, word-level accuracy via
 * sum-then-argmax on a held-out split, per-epoch metrics and a confusion
 * matrix for error analysis. */

import { readFileSync } from "node:fs";

import { numClasses as countClasses, prepare } from "./data.js";
import {
  Checkpoint,
  DualGroupAdam,
  EncoderWeights,
  backward,
  deserializeEncoder,
  forward,
  encOutDim,
  initHead,
  zeroGradients,
} from "./model.js";
import { wordPredictions } from "./predict.js";
import { Rng } from "./rng.js";
import { Tokenizer } from "./tokenizer.js";
import {
  DatasetLine,
  EmptyDataset,
  EpochMetrics,
  PreparedSentence,
  TokenizerMismatch,
  TrainConfig,
} from "./types.js";

export interface PretrainedEncoder {
  pieces: string[];
  encoder: EncoderWeights;
}

export function loadPretrainedEncoder(path: string): PretrainedEncoder {
  const doc = JSON.parse(readFileSync(path, "utf-8"));
  if (!Array.isArray(doc.pieces) || !doc.encoder) {
    throw new TokenizerMismatch(`${path}: not an encoder checkpoint`);
  }
  const encoder = deserializeEncoder(doc.encoder);
  if (encoder.vocabSize !== doc.pieces.length) {
    throw new TokenizerMismatch(
      `${path}: vocab size ${doc.pieces.length} != embedding rows ${encoder.vocabSize}`
    );
  }
  return { pieces: doc.pieces, encoder };
}

export interface TrainResult {
  checkpoint: Checkpoint;
  metrics: EpochMetrics[];
  confusion: number[][];
}

function evaluate(
  checkpoint: Checkpoint,
  sentences: PreparedSentence[]
): { accuracy: number; majority: number; confusion: number[][] } {
  const k = checkpoint.head.numClasses;
  const confusion = Array.from({ length: k }, () => new Array(k).fill(0));
  const counts = new Array(k).fill(0);
  let correct = 0;
  let total = 0;
  for (const sentence of sentences) {
    const cache = forward(checkpoint.encoder, checkpoint.head, sentence.tokenIds);
    const preds = wordPredictions(cache.probs, k, sentence);
    sentence.wordLabels.forEach((label, w) => {
      if (label < 0) return;
      counts[label]++;
      total++;
      if (preds[w] === label) correct++;
      if (preds[w] >= 0) confusion[label][preds[w]]++;
    });
  }
  const majority = total ? Math.max(...counts) / total : 0;
  return { accuracy: total ? correct / total : 0, majority, confusion };
}

export function trainClassifier(
  lines: DatasetLine[],
  pretrained: PretrainedEncoder,
  config: TrainConfig
): TrainResult {
  const tokenizer = Tokenizer.fromJSON(pretrained.pieces);
  const prepared = prepare(lines, tokenizer);
  const k = countClasses(lines);
  if (k < 1) throw new EmptyDataset("dataset carries no labels");

  const rng = new Rng(config.seed);
  const encoder: EncoderWeights = {
    ...pretrained.encoder,
    emb: pretrained.encoder.emb.slice(),
    w1: pretrained.encoder.w1.slice(),
    b1: pretrained.encoder.b1.slice(),
  };
  const head = initHead(k, encOutDim(encoder), rng);
  const checkpoint: Checkpoint = { version: 1, pieces: pretrained.pieces, encoder, head };

  const order = rng.shuffle(prepared.map((_, i) => i));
  const nEval = Math.max(1, Math.floor(prepared.length * config.evalFraction));
  const evalSet = order.slice(0, nEval).map((i) => prepared[i]);
  const trainSet = order.slice(nEval).map((i) => prepared[i]);
  if (!trainSet.length) throw new EmptyDataset("nothing left to train on after the split");

  const optimizer = new DualGroupAdam(config.encoderLr, config.headLr);
  const metrics: EpochMetrics[] = [];
  let confusion: number[][] = [];
  for (let epoch = 1; epoch <= config.epochs; epoch++) {
    rng.shuffle(trainSet);
    let lossSum = 0;
    let lossCount = 0;
    for (let start = 0; start < trainSet.length; start += config.batchSize) {
      const batch = trainSet.slice(start, start + config.batchSize);
      const grads = zeroGradients(encoder, head);
      let counted = 0;
      for (const sentence of batch) {
        const cache = forward(encoder, head, sentence.tokenIds);
        const [loss, n] = backward(encoder, head, cache, sentence.tokenLabels, grads);
        lossSum += loss;
        counted += n;
      }
      if (!counted) continue;
      lossCount += counted;
      const scale = 1 / counted;
      for (const g of [grads.emb, grads.w1, grads.b1, grads.w2, grads.b2]) {
        for (let i = 0; i < g.length; i++) g[i] *= scale;
      }
      optimizer.update(encoder, head, grads);
    }
    const evalStats = evaluate(checkpoint, evalSet);
    confusion = evalStats.confusion;
    metrics.push({
      epoch,
      loss: lossCount ? lossSum / lossCount : 0,
      wordAccuracy: evalStats.accuracy,
      majorityBaseline: evalStats.majority,
    });
  }
  return { checkpoint, metrics, confusion };
}
