// Trainer harness CLI. Mirrors the pipeline's stage-flag conventions:
//
//   tsx src/cli.ts train-prompt --prompts out/prompts.jsonl \
//       --meta out/prompts.meta.json --eval-prompts out/test_prompts.jsonl \
//       --out-dir out/run0 [--fewshot out/fewshot-k8-seed0.json] [--epochs 5] ...
//
// train-prompt fits the masked encoder and exports mask_vectors.jsonl,
// label_embeddings.jsonl, and predictions.jsonl; train-baseline fits the
// conventional classifier head and exports predictions.jsonl only.
//
// At full scale the same flags apply with a real MLM behind the encoder
// (e.g. roberta-base / biomed roberta, 5 epochs, batch 8, lr 3e-5); desk
// runs use the toy encoder and make no claim about published F1 numbers.

import * as path from "path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import {
  loadFewShotSplit,
  loadPromptMeta,
  loadPromptRecords,
  labelOrder,
  PromptRecord,
  TokenizationMismatch,
} from "./data.js";
import {
  BaselineModel,
  DEFAULT_CONFIG,
  PromptModel,
  TrainRunConfig,
  contextVector,
  trainBaseline,
  trainPrompt,
} from "./model.js";
import { exportRun, writeCheckpoint, writePredictions } from "./exchange.js";
import { tokenize } from "./data.js";

interface CommonArgs {
  prompts: string;
  meta: string;
  evalPrompts?: string;
  fewshot?: string;
  outDir: string;
  epochs: number;
  batchSize: number;
  lr: number;
  weightDecay: number;
  epsilon: number;
  seed: number;
  hiddenDim: number;
}

function toConfig(a: CommonArgs): TrainRunConfig {
  return {
    ...DEFAULT_CONFIG,
    epochs: a.epochs,
    batchSize: a.batchSize,
    learningRate: a.lr,
    weightDecay: a.weightDecay,
    epsilon: a.epsilon,
    seed: a.seed,
    hiddenDim: a.hiddenDim,
  };
}

function loadTrainSet(a: CommonArgs): {
  train: PromptRecord[];
  evalSet: PromptRecord[];
  meta: ReturnType<typeof loadPromptMeta>;
} {
  const meta = loadPromptMeta(a.meta);
  let train = loadPromptRecords(a.prompts);
  if (a.fewshot) {
    const ids = new Set(loadFewShotSplit(a.fewshot).train_ids);
    train = train.filter((r) => ids.has(r.example_id));
  }
  const evalSet = a.evalPrompts ? loadPromptRecords(a.evalPrompts) : train;
  return { train, evalSet, meta };
}

function runTrainPrompt(a: CommonArgs): void {
  const { train, evalSet, meta } = loadTrainSet(a);
  const cfg = toConfig(a);
  const model = new PromptModel(meta, cfg);
  const stats = trainPrompt(model, train, meta, cfg);
  console.log(
    `trained on ${train.length} records; ` +
      `loss ${stats.epochLosses.map((l) => l.toFixed(4)).join(" -> ") || "n/a"}`,
  );
  exportRun(model, evalSet, meta, a.outDir);
  writeCheckpoint(path.join(a.outDir, "checkpoint.json"), model, cfg, meta);
  console.log(`exchange files written to ${a.outDir}`);
}

function runTrainBaseline(a: CommonArgs): void {
  const { train, evalSet, meta } = loadTrainSet(a);
  const cfg = toConfig(a);
  const labels = labelOrder(meta);
  const model = new BaselineModel(labels, cfg);
  const contexts = train.map((r) =>
    contextVector(tokenize(r, meta), meta.template.mask_literal, cfg.hiddenDim),
  );
  const golds = train.map((r) => {
    const idx = labels.indexOf(r.gold_label);
    if (idx < 0) throw new Error(`unknown label ${r.gold_label}`);
    return idx;
  });
  const stats = trainBaseline(model, contexts, golds, cfg);
  console.log(
    `trained baseline on ${train.length} records; ` +
      `loss ${stats.epochLosses.map((l) => l.toFixed(4)).join(" -> ") || "n/a"}`,
  );
  const predictions = evalSet.map((r) => ({
    exampleId: r.example_id,
    label: model.predict(
      contextVector(tokenize(r, meta), meta.template.mask_literal, cfg.hiddenDim),
    ),
  }));
  writePredictions(path.join(a.outDir, "predictions.jsonl"), predictions);
  console.log(`predictions written to ${a.outDir}`);
}

const common = {
  prompts: { type: "string" as const, demandOption: true,
             describe: "emitted prompt records (train split)" },
  meta: { type: "string" as const, demandOption: true,
          describe: "emitter sidecar with template + verbalizers" },
  "eval-prompts": { type: "string" as const,
                    describe: "records to export vectors/predictions for" },
  fewshot: { type: "string" as const,
             describe: "few-shot split file restricting the train ids" },
  "out-dir": { type: "string" as const, demandOption: true },
  epochs: { type: "number" as const, default: DEFAULT_CONFIG.epochs },
  "batch-size": { type: "number" as const, default: DEFAULT_CONFIG.batchSize },
  lr: { type: "number" as const, default: DEFAULT_CONFIG.learningRate },
  "weight-decay": { type: "number" as const, default: DEFAULT_CONFIG.weightDecay },
  epsilon: { type: "number" as const, default: DEFAULT_CONFIG.epsilon },
  seed: { type: "number" as const, default: DEFAULT_CONFIG.seed },
  "hidden-dim": { type: "number" as const, default: DEFAULT_CONFIG.hiddenDim },
};

export async function main(argv: string[]): Promise<number> {
  try {
    await yargs(argv)
      .command(
        "train-prompt",
        "fine-tune the masked encoder and export exchange files",
        common,
        (a) => runTrainPrompt(a as unknown as CommonArgs),
      )
      .command(
        "train-baseline",
        "fit the classifier-head baseline and export predictions",
        common,
        (a) => runTrainBaseline(a as unknown as CommonArgs),
      )
      .demandCommand(1)
      .strict()
      .parseAsync();
    return 0;
  } catch (err) {
    if (err instanceof TokenizationMismatch) {
      console.error(JSON.stringify({ error: "TokenizationMismatch", detail: String(err.message) }));
      return 2;
    }
    console.error(JSON.stringify({ error: "internal", detail: String(err) }));
    return 3;
  }
}

const invoked = process.argv[1] ?? "";
if (invoked.endsWith("cli.ts") || invoked.endsWith("cli.js")) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
