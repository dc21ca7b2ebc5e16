export { Tokenizer, induceVocab, isPunctuation } from "./tokenizer.js";
export { parseDataset, loadDataset, prepare, prepareSentence, numClasses } from "./data.js";
export {
  forward,
  backward,
  encode,
  initEncoder,
  initHead,
  DualGroupAdam,
  serializeCheckpoint,
  deserializeCheckpoint,
} from "./model.js";
export type { Checkpoint, EncoderWeights, HeadWeights } from "./model.js";
export { trainClassifier, loadPretrainedEncoder } from "./train.js";
export { predictSentences, sumThenArgmax, wordPredictions } from "./predict.js";
export { makeSeparableCorpus } from "./corpus.js";
export { Rng } from "./rng.js";
export * from "./types.js";
