// Toy trainable masked encoder. Stand-in for a transformer MLM at desk scale:
// the context is the mean of fixed hash embeddings of the non-mask tokens, and
// each mask position gets its own trainable affine map producing the "hidden
// state" at that position. Predictions are mean-of-cosines against the label
// word embeddings, exactly the rule the downstream scorer applies, so the
// exchange files round-trip to identical argmaxes.

import {
  Vec,
  cosine,
  dot,
  embedWord,
  mulberry32,
  norm,
  shuffleInPlace,
  softmax,
  zeros,
} from "./math.js";
import { PromptMeta, PromptRecord, labelOrder, tokenize } from "./data.js";

export interface TrainRunConfig {
  epochs: number;       // 5
  batchSize: number;    // 8
  learningRate: number; // 3e-5
  weightDecay: number;  // 1e-2
  epsilon: number;      // 1e-6
  seed: number;
  hiddenDim: number;
  temperature: number;  // softmax sharpening of the cosine scores
}

export const DEFAULT_CONFIG: TrainRunConfig = {
  epochs: 5,
  batchSize: 8,
  learningRate: 3e-5,
  weightDecay: 1e-2,
  epsilon: 1e-6,
  seed: 0,
  hiddenDim: 32,
  temperature: 0.1,
};

class AdamW {
  private m: Float64Array;
  private v: Float64Array;
  private t = 0;

  constructor(
    size: number,
    private lr: number,
    private wd: number,
    private eps: number,
    private beta1 = 0.9,
    private beta2 = 0.999,
  ) {
    this.m = new Float64Array(size);
    this.v = new Float64Array(size);
  }

  step(params: Float64Array, grads: Float64Array): void {
    this.t += 1;
    const bc1 = 1 - Math.pow(this.beta1, this.t);
    const bc2 = 1 - Math.pow(this.beta2, this.t);
    for (let i = 0; i < params.length; i++) {
      this.m[i] = this.beta1 * this.m[i] + (1 - this.beta1) * grads[i];
      this.v[i] = this.beta2 * this.v[i] + (1 - this.beta2) * grads[i] * grads[i];
      const mHat = this.m[i] / bc1;
      const vHat = this.v[i] / bc2;
      params[i] -=
        this.lr * (mHat / (Math.sqrt(vHat) + this.eps) + this.wd * params[i]);
    }
  }
}

export function contextVector(tokens: string[], maskLiteral: string, dim: number): Vec {
  const c = zeros(dim);
  let n = 0;
  for (const tok of tokens) {
    if (tok === maskLiteral) continue;
    const v = embedWord(tok.toLowerCase(), dim);
    for (let i = 0; i < dim; i++) c[i] += v[i];
    n += 1;
  }
  if (n > 0) for (let i = 0; i < dim; i++) c[i] /= n;
  return c;
}

/** d cos(h, e) / dh, taken as 0 at h = 0 (cosine is defined as 0 there). */
function cosineGradWrtH(h: Vec, e: Vec): Vec {
  const g = zeros(h.length);
  const nh = norm(h);
  const ne = norm(e);
  if (nh === 0 || ne === 0) return g;
  const d = dot(h, e);
  for (let i = 0; i < h.length; i++) {
    g[i] = e[i] / (nh * ne) - (d * h[i]) / (nh * nh * nh * ne);
  }
  return g;
}

export class PromptModel {
  readonly labels: string[];
  readonly labelEmbeddings: Map<string, Vec[]>; // label -> L fixed vectors
  readonly L: number;
  readonly dim: number;
  // per mask position: affine map hidden = W c + b, packed [W(dim*dim), b(dim)]
  readonly params: Float64Array[];
  private readonly maskLiteral: string;

  constructor(meta: PromptMeta, cfg: TrainRunConfig) {
    this.labels = labelOrder(meta);
    this.L = meta.template.mask_count;
    this.dim = cfg.hiddenDim;
    this.maskLiteral = meta.template.mask_literal;
    this.labelEmbeddings = new Map();
    for (const label of this.labels) {
      this.labelEmbeddings.set(
        label,
        meta.verbalizers[label].map((w) => embedWord(w, this.dim)),
      );
    }
    // W starts at zero; b gets a small seeded init so cosine gradients exist.
    // Untrained, every example maps to the same hidden states.
    const rand = mulberry32(cfg.seed ^ 0x5eed);
    this.params = [];
    for (let j = 0; j < this.L; j++) {
      const p = new Float64Array(this.dim * this.dim + this.dim);
      for (let i = 0; i < this.dim; i++) {
        p[this.dim * this.dim + i] = 0.01 * (rand() * 2 - 1);
      }
      this.params.push(p);
    }
  }

  context(record: PromptRecord, meta: PromptMeta): Vec {
    return contextVector(tokenize(record, meta), this.maskLiteral, this.dim);
  }

  hidden(c: Vec): Vec[] {
    const out: Vec[] = [];
    for (let j = 0; j < this.L; j++) {
      const p = this.params[j];
      const h = zeros(this.dim);
      for (let r = 0; r < this.dim; r++) {
        let s = p[this.dim * this.dim + r]; // bias
        const row = r * this.dim;
        for (let k = 0; k < this.dim; k++) s += p[row + k] * c[k];
        h[r] = s;
      }
      out.push(h);
    }
    return out;
  }

  /** Mean-of-cosines score per label, in label order. */
  scores(h: Vec[]): number[] {
    return this.labels.map((label) => {
      const embs = this.labelEmbeddings.get(label)!;
      let s = 0;
      for (let j = 0; j < this.L; j++) s += cosine(h[j], embs[j]);
      return s / this.L;
    });
  }

  /** Argmax label; ties resolved by label order (strict > comparison). */
  predict(h: Vec[]): string {
    const s = this.scores(h);
    let best = 0;
    for (let i = 1; i < s.length; i++) if (s[i] > s[best]) best = i;
    return this.labels[best];
  }
}

export interface TrainStats {
  epochLosses: number[];
}

export function trainPrompt(
  model: PromptModel,
  records: PromptRecord[],
  meta: PromptMeta,
  cfg: TrainRunConfig,
): TrainStats {
  const size = model.params[0].length;
  const optimizers = model.params.map(
    () => new AdamW(size, cfg.learningRate, cfg.weightDecay, cfg.epsilon),
  );
  const contexts = records.map((r) => model.context(r, meta));
  const goldIdx = records.map((r) => {
    const idx = model.labels.indexOf(r.gold_label);
    if (idx < 0) throw new Error(`no verbalizer for label ${r.gold_label}`);
    return idx;
  });
  const order = records.map((_, i) => i);
  const rand = mulberry32(cfg.seed);
  const epochLosses: number[] = [];

  for (let epoch = 0; epoch < cfg.epochs; epoch++) {
    shuffleInPlace(order, rand);
    let epochLoss = 0;
    for (let start = 0; start < order.length; start += cfg.batchSize) {
      const batch = order.slice(start, start + cfg.batchSize);
      const grads = model.params.map(() => new Float64Array(size));
      for (const i of batch) {
        const c = contexts[i];
        const h = model.hidden(c);
        const s = model.scores(h);
        const probs = softmax(s.map((x) => x / cfg.temperature));
        epochLoss += -Math.log(Math.max(probs[goldIdx[i]], 1e-300));
        for (let j = 0; j < model.L; j++) {
          const dh = zeros(model.dim);
          for (let r = 0; r < model.labels.length; r++) {
            const coeff =
              ((probs[r] - (r === goldIdx[i] ? 1 : 0)) /
                (cfg.temperature * model.L)) /
              batch.length;
            if (coeff === 0) continue;
            const e = model.labelEmbeddings.get(model.labels[r])![j];
            const g = cosineGradWrtH(h[j], e);
            for (let k = 0; k < model.dim; k++) dh[k] += coeff * g[k];
          }
          const gj = grads[j];
          for (let r = 0; r < model.dim; r++) {
            const row = r * model.dim;
            for (let k = 0; k < model.dim; k++) gj[row + k] += dh[r] * c[k];
            gj[model.dim * model.dim + r] += dh[r];
          }
        }
      }
      for (let j = 0; j < model.L; j++) optimizers[j].step(model.params[j], grads[j]);
    }
    epochLosses.push(epochLoss / order.length);
  }
  return { epochLosses };
}

/** Conventional classifier head over the context vector (the baseline arm). */
export class BaselineModel {
  readonly labels: string[];
  readonly dim: number;
  readonly params: Float64Array; // [U (nLabels*dim), d (nLabels)]

  constructor(labels: string[], cfg: TrainRunConfig) {
    this.labels = labels;
    this.dim = cfg.hiddenDim;
    this.params = new Float64Array(labels.length * this.dim + labels.length);
  }

  logits(c: Vec): number[] {
    const out: number[] = [];
    for (let r = 0; r < this.labels.length; r++) {
      let s = this.params[this.labels.length * this.dim + r];
      const row = r * this.dim;
      for (let k = 0; k < this.dim; k++) s += this.params[row + k] * c[k];
      out.push(s);
    }
    return out;
  }

  predict(c: Vec): string {
    const s = this.logits(c);
    let best = 0;
    for (let i = 1; i < s.length; i++) if (s[i] > s[best]) best = i;
    return this.labels[best];
  }
}

export function trainBaseline(
  model: BaselineModel,
  contexts: Vec[],
  golds: number[],
  cfg: TrainRunConfig,
): TrainStats {
  const opt = new AdamW(
    model.params.length, cfg.learningRate, cfg.weightDecay, cfg.epsilon,
  );
  const order = contexts.map((_, i) => i);
  const rand = mulberry32(cfg.seed);
  const epochLosses: number[] = [];
  const nLabels = model.labels.length;

  for (let epoch = 0; epoch < cfg.epochs; epoch++) {
    shuffleInPlace(order, rand);
    let epochLoss = 0;
    for (let start = 0; start < order.length; start += cfg.batchSize) {
      const batch = order.slice(start, start + cfg.batchSize);
      const grads = new Float64Array(model.params.length);
      for (const i of batch) {
        const c = contexts[i];
        const probs = softmax(model.logits(c));
        epochLoss += -Math.log(Math.max(probs[golds[i]], 1e-300));
        for (let r = 0; r < nLabels; r++) {
          const coeff = (probs[r] - (r === golds[i] ? 1 : 0)) / batch.length;
          if (coeff === 0) continue;
          const row = r * model.dim;
          for (let k = 0; k < model.dim; k++) grads[row + k] += coeff * c[k];
          grads[nLabels * model.dim + r] += coeff;
        }
      }
      opt.step(model.params, grads);
    }
    epochLosses.push(epochLoss / order.length);
  }
  return { epochLosses };
}
