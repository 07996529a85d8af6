// Small deterministic numeric kernel: vectors, cosine, seeded PRNG, and the
// hash-based word embedder the toy encoder is built on.

export type Vec = Float64Array;

export function zeros(n: number): Vec {
  return new Float64Array(n);
}

export function dot(a: Vec, b: Vec): number {
  let s = 0;
  for (let i = 0; i < a.length; i++) s += a[i] * b[i];
  return s;
}

export function norm(a: Vec): number {
  return Math.sqrt(dot(a, a));
}

/** Cosine similarity; 0 when either vector is all-zero (matches the scorer). */
export function cosine(a: Vec, b: Vec): number {
  if (a.length !== b.length) {
    throw new Error(`dimension mismatch: ${a.length} vs ${b.length}`);
  }
  const na = norm(a);
  const nb = norm(b);
  if (na === 0 || nb === 0) return 0;
  return dot(a, b) / (na * nb);
}

/** mulberry32: tiny deterministic PRNG, good enough for init and shuffling. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** FNV-1a string hash, used to seed per-word embedding streams. */
export function fnv1a(s: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < s.length; i++) {
    h ^= s.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

/** Fixed unit-norm embedding per word, derived from its hash; never trained. */
export function hashEmbed(word: string, dim: number): Vec {
  const rand = mulberry32(fnv1a(word));
  const v = zeros(dim);
  for (let i = 0; i < dim; i++) v[i] = rand() * 2 - 1;
  const n = norm(v);
  for (let i = 0; i < dim; i++) v[i] /= n;
  return v;
}

/**
 * Embedding of a (label) word that may segment into several pieces: the mean
 * of the piece vectors. With the whitespace tokenizer a word is one piece,
 * but the averaging rule is recorded in the exchange metadata regardless.
 */
export function embedWord(word: string, dim: number): Vec {
  const pieces = word.split(/\s+/).filter((p) => p.length > 0);
  const out = zeros(dim);
  for (const p of pieces) {
    const v = hashEmbed(p.toLowerCase(), dim);
    for (let i = 0; i < dim; i++) out[i] += v[i];
  }
  for (let i = 0; i < dim; i++) out[i] /= pieces.length;
  return out;
}

export function shuffleInPlace<T>(arr: T[], rand: () => number): void {
  for (let i = arr.length - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [arr[i], arr[j]] = [arr[j], arr[i]];
  }
}

/** Numerically stable softmax. */
export function softmax(logits: number[]): number[] {
  const m = Math.max(...logits);
  const exps = logits.map((x) => Math.exp(x - m));
  const z = exps.reduce((a, b) => a + b, 0);
  return exps.map((e) => e / z);
}
