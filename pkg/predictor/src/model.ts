/** Tiny bidirectional token encoder plus a linear classification head.
 *
 * Each token's representation mixes its own embedding with both neighbors
 * (window-3, zero padding at sentence edges) through one tanh layer and
 * carries the token's own embedding alongside as a residual, so the encoding
 * is bidirectional but keeps token identity crisp. Forward and backward
 * passes are hand-written; the optimizer runs AdamW with two parameter
 * groups so the pretrained encoder can learn slowly (1e-5) under a fast
 * head (1e-3), never frozen.
 */

import { Rng } from "./rng.js";

export interface EncoderWeights {
  vocabSize: number;
  dEmb: number;
  dHidden: number;
  emb: Float64Array; // vocabSize x dEmb
  w1: Float64Array; // dHidden x 3*dEmb
  b1: Float64Array; // dHidden
}

export interface HeadWeights {
  numClasses: number;
  w2: Float64Array; // numClasses x (dHidden + dEmb)
  b2: Float64Array; // numClasses
}

/** Width of the encoder output: mixed context plus the residual embedding. */
export function encOutDim(enc: Pick<EncoderWeights, "dEmb" | "dHidden">): number {
  return enc.dHidden + enc.dEmb;
}

export interface Checkpoint {
  version: 1;
  pieces: string[];
  encoder: EncoderWeights;
  head: HeadWeights;
}

export function initEncoder(
  vocabSize: number,
  dEmb: number,
  dHidden: number,
  rng: Rng
): EncoderWeights {
  const emb = new Float64Array(vocabSize * dEmb);
  for (let i = 0; i < emb.length; i++) emb[i] = rng.uniform(0.5);
  const w1 = new Float64Array(dHidden * 3 * dEmb);
  const scale = Math.sqrt(1 / (3 * dEmb));
  for (let i = 0; i < w1.length; i++) w1[i] = rng.uniform(scale);
  return { vocabSize, dEmb, dHidden, emb, w1, b1: new Float64Array(dHidden) };
}

export function initHead(numClasses: number, dHidden: number, rng: Rng): HeadWeights {
  const w2 = new Float64Array(numClasses * dHidden);
  const scale = Math.sqrt(1 / dHidden);
  for (let i = 0; i < w2.length; i++) w2[i] = rng.uniform(scale);
  return { numClasses, w2, b2: new Float64Array(numClasses) };
}

export interface ForwardCache {
  tokenIds: number[];
  hidden: Float64Array; // n x dHidden
  probs: Float64Array; // n x numClasses
}

/** Encoder outputs for one sentence: n rows of [tanh(W1 window); e_cur]. */
export function encode(enc: EncoderWeights, tokenIds: number[]): Float64Array {
  const { dEmb, dHidden, emb, w1, b1 } = enc;
  const n = tokenIds.length;
  const width = dHidden + dEmb;
  const hidden = new Float64Array(n * width);
  const x = new Float64Array(3 * dEmb);
  for (let i = 0; i < n; i++) {
    x.fill(0);
    for (let slot = 0; slot < 3; slot++) {
      const j = i + slot - 1;
      if (j < 0 || j >= n) continue;
      const base = tokenIds[j] * dEmb;
      for (let d = 0; d < dEmb; d++) x[slot * dEmb + d] = emb[base + d];
    }
    for (let h = 0; h < dHidden; h++) {
      let acc = b1[h];
      const row = h * 3 * dEmb;
      for (let d = 0; d < 3 * dEmb; d++) acc += w1[row + d] * x[d];
      hidden[i * width + h] = Math.tanh(acc);
    }
    const curBase = tokenIds[i] * dEmb;
    for (let d = 0; d < dEmb; d++) hidden[i * width + dHidden + d] = emb[curBase + d];
  }
  return hidden;
}

export function forward(enc: EncoderWeights, head: HeadWeights, tokenIds: number[]): ForwardCache {
  const width = encOutDim(enc);
  const { numClasses, w2, b2 } = head;
  const n = tokenIds.length;
  const hidden = encode(enc, tokenIds);
  const probs = new Float64Array(n * numClasses);
  for (let i = 0; i < n; i++) {
    let max = -Infinity;
    const logits = new Float64Array(numClasses);
    for (let c = 0; c < numClasses; c++) {
      let acc = b2[c];
      const row = c * width;
      for (let h = 0; h < width; h++) acc += w2[row + h] * hidden[i * width + h];
      logits[c] = acc;
      if (acc > max) max = acc;
    }
    let z = 0;
    for (let c = 0; c < numClasses; c++) {
      const e = Math.exp(logits[c] - max);
      probs[i * numClasses + c] = e;
      z += e;
    }
    for (let c = 0; c < numClasses; c++) probs[i * numClasses + c] /= z;
  }
  return { tokenIds, hidden, probs };
}

export interface Gradients {
  emb: Float64Array;
  w1: Float64Array;
  b1: Float64Array;
  w2: Float64Array;
  b2: Float64Array;
}

export function zeroGradients(enc: EncoderWeights, head: HeadWeights): Gradients {
  return {
    emb: new Float64Array(enc.emb.length),
    w1: new Float64Array(enc.w1.length),
    b1: new Float64Array(enc.b1.length),
    w2: new Float64Array(head.w2.length),
    b2: new Float64Array(head.b2.length),
  };
}

/** Cross-entropy over unmasked tokens (label >= 0); accumulates gradients
 * in place and returns (summed loss, counted tokens). */
export function backward(
  enc: EncoderWeights,
  head: HeadWeights,
  cache: ForwardCache,
  labels: number[],
  grads: Gradients
): [number, number] {
  const { dEmb, dHidden, w1 } = enc;
  const width = encOutDim(enc);
  const { numClasses, w2 } = head;
  const { tokenIds, hidden, probs } = cache;
  const n = tokenIds.length;
  let loss = 0;
  let counted = 0;
  const dOut = new Float64Array(n * width);
  for (let i = 0; i < n; i++) {
    const label = labels[i];
    if (label < 0) continue;
    counted++;
    loss += -Math.log(Math.max(probs[i * numClasses + label], 1e-12));
    for (let c = 0; c < numClasses; c++) {
      const delta = probs[i * numClasses + c] - (c === label ? 1 : 0);
      grads.b2[c] += delta;
      const row = c * width;
      for (let h = 0; h < width; h++) {
        grads.w2[row + h] += delta * hidden[i * width + h];
        dOut[i * width + h] += delta * w2[row + h];
      }
    }
  }
  if (counted === 0) return [0, 0];
  for (let i = 0; i < n; i++) {
    let any = false;
    for (let h = 0; h < width; h++) {
      if (dOut[i * width + h] !== 0) {
        any = true;
        break;
      }
    }
    if (!any) continue;
    // residual path: straight into the current token's embedding
    const curBase = tokenIds[i] * dEmb;
    for (let d = 0; d < dEmb; d++) {
      grads.emb[curBase + d] += dOut[i * width + dHidden + d];
    }
    // context path: through tanh into W1, b1 and the neighbor embeddings
    for (let h = 0; h < dHidden; h++) {
      const hv = hidden[i * width + h];
      const dPre = dOut[i * width + h] * (1 - hv * hv);
      if (dPre === 0) continue;
      grads.b1[h] += dPre;
      const row = h * 3 * dEmb;
      for (let slot = 0; slot < 3; slot++) {
        const j = i + slot - 1;
        if (j < 0 || j >= n) continue;
        const embBase = tokenIds[j] * dEmb;
        const xBase = slot * dEmb;
        for (let d = 0; d < dEmb; d++) {
          grads.w1[row + xBase + d] += dPre * enc.emb[embBase + d];
          grads.emb[embBase + d] += dPre * w1[row + xBase + d];
        }
      }
    }
  }
  return [loss, counted];
}

interface AdamState {
  m: Float64Array;
  v: Float64Array;
}

/** AdamW with two learning-rate groups; decoupled decay hits weight
 * matrices only, never biases. */
export class DualGroupAdam {
  private states = new Map<string, AdamState>();
  private step = 0;
  readonly beta1 = 0.9;
  readonly beta2 = 0.999;
  readonly eps = 1e-8;

  constructor(
    readonly encoderLr: number,
    readonly headLr: number,
    readonly weightDecay = 0.01
  ) {}

  private apply(
    name: string,
    params: Float64Array,
    grads: Float64Array,
    lr: number,
    decay: number
  ) {
    let st = this.states.get(name);
    if (!st) {
      st = { m: new Float64Array(params.length), v: new Float64Array(params.length) };
      this.states.set(name, st);
    }
    const bc1 = 1 - Math.pow(this.beta1, this.step);
    const bc2 = 1 - Math.pow(this.beta2, this.step);
    for (let i = 0; i < params.length; i++) {
      const g = grads[i];
      st.m[i] = this.beta1 * st.m[i] + (1 - this.beta1) * g;
      st.v[i] = this.beta2 * st.v[i] + (1 - this.beta2) * g * g;
      const mHat = st.m[i] / bc1;
      const vHat = st.v[i] / bc2;
      params[i] -= (lr * mHat) / (Math.sqrt(vHat) + this.eps) + lr * decay * params[i];
    }
  }

  update(enc: EncoderWeights, head: HeadWeights, grads: Gradients) {
    this.step++;
    const wd = this.weightDecay;
    this.apply("emb", enc.emb, grads.emb, this.encoderLr, wd);
    this.apply("w1", enc.w1, grads.w1, this.encoderLr, wd);
    this.apply("b1", enc.b1, grads.b1, this.encoderLr, 0);
    this.apply("w2", head.w2, grads.w2, this.headLr, wd);
    this.apply("b2", head.b2, grads.b2, this.headLr, 0);
  }
}

// -- (de)serialization -------------------------------------------------------

function packEncoder(enc: EncoderWeights) {
  return {
    vocabSize: enc.vocabSize,
    dEmb: enc.dEmb,
    dHidden: enc.dHidden,
    emb: Array.from(enc.emb),
    w1: Array.from(enc.w1),
    b1: Array.from(enc.b1),
  };
}

export function serializeCheckpoint(cp: Checkpoint): string {
  return JSON.stringify({
    version: cp.version,
    pieces: cp.pieces,
    encoder: packEncoder(cp.encoder),
    head: {
      numClasses: cp.head.numClasses,
      w2: Array.from(cp.head.w2),
      b2: Array.from(cp.head.b2),
    },
  });
}

export function deserializeEncoder(doc: any): EncoderWeights {
  return {
    vocabSize: doc.vocabSize,
    dEmb: doc.dEmb,
    dHidden: doc.dHidden,
    emb: Float64Array.from(doc.emb),
    w1: Float64Array.from(doc.w1),
    b1: Float64Array.from(doc.b1),
  };
}

export function deserializeCheckpoint(json: string): Checkpoint {
  const doc = JSON.parse(json);
  return {
    version: doc.version,
    pieces: doc.pieces,
    encoder: deserializeEncoder(doc.encoder),
    head: {
      numClasses: doc.head.numClasses,
      w2: Float64Array.from(doc.head.w2),
      b2: Float64Array.from(doc.head.b2),
    },
  };
}
