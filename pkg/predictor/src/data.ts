/** Dataset loading and tokenization: each word's pattern label is copied to
 * every one of its sub-tokens; punctuation-only words are masked out. */

import { readFileSync } from "node:fs";

import { Tokenizer, isPunctuation } from "./tokenizer.js";
import { DatasetLine, EmptyDataset, PreparedSentence } from "./types.js";

export function parseDataset(jsonl: string): DatasetLine[] {
  const lines: DatasetLine[] = [];
  for (const raw of jsonl.split("\n")) {
    if (!raw.trim()) continue;
    const doc = JSON.parse(raw);
    if (typeof doc.text !== "string" || !Array.isArray(doc.labels)) {
      throw new EmptyDataset(`bad dataset line: ${raw.slice(0, 80)}`);
    }
    lines.push({ text: doc.text, labels: doc.labels });
  }
  if (!lines.length) throw new EmptyDataset("dataset has no lines");
  return lines;
}

export function loadDataset(path: string): DatasetLine[] {
  return parseDataset(readFileSync(path, "utf-8"));
}

export function prepareSentence(line: DatasetLine, tokenizer: Tokenizer): PreparedSentence | null {
  const tokenIds: number[] = [];
  const tokenLabels: number[] = [];
  const wordSpans: [number, number][] = [];
  const wordLabels: number[] = [];
  const words: string[] = [];
  for (const [word, patternId] of line.labels) {
    const pieces = tokenizer.encodeWord(word);
    const masked = isPunctuation(word);
    const label = masked ? -1 : patternId;
    const start = tokenIds.length;
    for (const id of pieces) {
      tokenIds.push(id);
      tokenLabels.push(label);
    }
    wordSpans.push([start, tokenIds.length]);
    wordLabels.push(label);
    words.push(word);
  }
  if (wordLabels.every((l) => l < 0)) return null; // nothing to learn from
  return { tokenIds, tokenLabels, wordSpans, wordLabels, words };
}

/** Tokenize the whole dataset; sentences of only punctuation are dropped. */
export function prepare(lines: DatasetLine[], tokenizer: Tokenizer): PreparedSentence[] {
  const out: PreparedSentence[] = [];
  for (const line of lines) {
    const prepared = prepareSentence(line, tokenizer);
    if (prepared) out.push(prepared);
  }
  if (!out.length) throw new EmptyDataset("every sentence was punctuation-only");
  return out;
}

export function numClasses(lines: DatasetLine[]): number {
  let max = -1;
  for (const line of lines) {
    for (const [, patternId] of line.labels) {
      if (patternId > max) max = patternId;
    }
  }
  return max + 1;
}
