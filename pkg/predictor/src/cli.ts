#!/usr/bin/env node
/** Commands:
 *   train   --dataset d.jsonl --out checkpoint.json [--encoder enc.json]
 *           [--epochs 5] [--batch 32] [--seed 17] [--metrics metrics.json]
 *   predict --checkpoint checkpoint.json --in sentences.txt --out preds.jsonl
 *   eval    --checkpoint checkpoint.json --dataset d.jsonl
 */

import { readFileSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { loadDataset, numClasses, prepare } from "./data.js";
import { deserializeCheckpoint, forward, serializeCheckpoint } from "./model.js";
import { predictSentences, wordPredictions } from "./predict.js";
import { Tokenizer } from "./tokenizer.js";
import { loadPretrainedEncoder, trainClassifier } from "./train.js";
import { DEFAULT_TRAIN_CONFIG } from "./types.js";

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    if (!argv[i].startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`bad arguments near ${argv[i]}`);
    }
    out.set(argv[i].slice(2), argv[i + 1]);
  }
  return out;
}

function defaultEncoderPath(): string {
  const here = dirname(fileURLToPath(import.meta.url));
  return join(here, "..", "..", "pretrained", "encoder-mini.json");
}

function cmdTrain(args: Map<string, string>): number {
  const dataset = loadDataset(args.get("dataset")!);
  const encoderPath = args.get("encoder") ?? defaultEncoderPath();
  const config = {
    ...DEFAULT_TRAIN_CONFIG,
    encoderCheckpoint: encoderPath,
    epochs: Number(args.get("epochs") ?? DEFAULT_TRAIN_CONFIG.epochs),
    batchSize: Number(args.get("batch") ?? DEFAULT_TRAIN_CONFIG.batchSize),
    seed: Number(args.get("seed") ?? DEFAULT_TRAIN_CONFIG.seed),
  };
  const pretrained = loadPretrainedEncoder(encoderPath);
  const result = trainClassifier(dataset, pretrained, config);
  writeFileSync(args.get("out")!, serializeCheckpoint(result.checkpoint));
  for (const m of result.metrics) {
    console.log(
      `epoch ${m.epoch}: loss ${m.loss.toFixed(4)} ` +
        `word-acc ${m.wordAccuracy.toFixed(3)} (majority ${m.majorityBaseline.toFixed(3)})`
    );
  }
  if (args.has("metrics")) {
    writeFileSync(
      args.get("metrics")!,
      JSON.stringify({ metrics: result.metrics, confusion: result.confusion }, null, 2)
    );
  }
  console.log(`wrote ${args.get("out")} (k=${numClasses(dataset)})`);
  return 0;
}

function cmdPredict(args: Map<string, string>): number {
  const checkpoint = deserializeCheckpoint(readFileSync(args.get("checkpoint")!, "utf-8"));
  const sentences = readFileSync(args.get("in")!, "utf-8")
    .split("\n")
    .filter((l) => l.trim().length > 0);
  const predictions = predictSentences(checkpoint, sentences);
  const out = predictions.map((p) => JSON.stringify(p)).join("\n") + "\n";
  writeFileSync(args.get("out")!, out);
  console.log(`predicted ${predictions.length} sentences -> ${args.get("out")}`);
  return 0;
}

function cmdEval(args: Map<string, string>): number {
  const checkpoint = deserializeCheckpoint(readFileSync(args.get("checkpoint")!, "utf-8"));
  const dataset = loadDataset(args.get("dataset")!);
  const tokenizer = Tokenizer.fromJSON(checkpoint.pieces);
  const prepared = prepare(dataset, tokenizer);
  const k = checkpoint.head.numClasses;
  let correct = 0;
  let total = 0;
  for (const sentence of prepared) {
    const cache = forward(checkpoint.encoder, checkpoint.head, sentence.tokenIds);
    const preds = wordPredictions(cache.probs, k, sentence);
    sentence.wordLabels.forEach((label, w) => {
      if (label < 0) return;
      total++;
      if (preds[w] === label) correct++;
    });
  }
  console.log(`word accuracy ${(correct / Math.max(total, 1)).toFixed(4)} over ${total} words`);
  return 0;
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    const args = parseArgs(rest);
    if (command === "train") return cmdTrain(args);
    if (command === "predict") return cmdPredict(args);
    if (command === "eval") return cmdEval(args);
    console.error("usage: pasta-predict {train|predict|eval} --flags ...");
    return 1;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
