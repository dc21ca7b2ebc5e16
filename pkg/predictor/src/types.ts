/** One line of the exported dataset: sentence text plus per-word labels. */
export interface DatasetLine {
  text: string;
  labels: [word: string, patternId: number, stateId: number][];
}

/** A tokenized sentence ready for training: every sub-token carries its
 * word's pattern label, or -1 where masked (punctuation, padding). */
export interface PreparedSentence {
  tokenIds: number[];
  tokenLabels: number[];
  /** index range [start, end) of each word's sub-tokens */
  wordSpans: [number, number][];
  /** pattern label per word, -1 for punctuation-only words */
  wordLabels: number[];
  words: string[];
}

export interface TrainConfig {
  encoderCheckpoint: string;
  epochs: number;
  batchSize: number;
  headLr: number;
  encoderLr: number;
  seed: number;
  evalFraction: number;
}

export const DEFAULT_TRAIN_CONFIG: TrainConfig = {
  encoderCheckpoint: "",
  epochs: 5,
  batchSize: 32,
  headLr: 1e-3, // classifier head
  encoderLr: 1e-5, // encoder stays plastic but slow; never frozen
  seed: 17,
  evalFraction: 0.2,
};

export interface EpochMetrics {
  epoch: number;
  loss: number;
  wordAccuracy: number;
  majorityBaseline: number;
}

export class TokenizerMismatch extends Error {}
export class EmptyDataset extends Error {}
export class EmptyInput extends Error {}
