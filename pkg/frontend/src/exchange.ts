// Writers for the exchange files consumed by the pipeline's `score`/`eval`
// stages, plus a JSON checkpoint for resuming or inspection.

import * as fs from "fs";
import * as path from "path";
import { Vec } from "./math.js";
import { PromptMeta, PromptRecord } from "./data.js";
import { PromptModel, TrainRunConfig } from "./model.js";

function writeLines(file: string, lines: string[]): void {
  fs.mkdirSync(path.dirname(file), { recursive: true });
  fs.writeFileSync(file, lines.map((l) => l + "\n").join(""));
}

export function writeMaskVectors(
  file: string,
  rows: { exampleId: string; vectors: Vec[] }[],
): void {
  writeLines(
    file,
    rows.map((r) =>
      JSON.stringify({
        example_id: r.exampleId,
        vectors: r.vectors.map((v) => Array.from(v)),
      }),
    ),
  );
}

export function writeLabelEmbeddings(file: string, model: PromptModel): void {
  writeLines(
    file,
    model.labels.map((label) =>
      JSON.stringify({
        label,
        vectors: model.labelEmbeddings.get(label)!.map((v) => Array.from(v)),
      }),
    ),
  );
}

export function writePredictions(
  file: string,
  rows: { exampleId: string; label: string }[],
): void {
  writeLines(
    file,
    rows.map((r) => JSON.stringify({ example_id: r.exampleId, label: r.label })),
  );
}

export function writeCheckpoint(
  file: string,
  model: PromptModel,
  cfg: TrainRunConfig,
  meta: PromptMeta,
): void {
  fs.mkdirSync(path.dirname(file), { recursive: true });
  fs.writeFileSync(
    file,
    JSON.stringify(
      {
        config: cfg,
        template: meta.template,
        // label words segmenting into several pieces are embedded as the
        // mean of the piece vectors; recorded here for downstream parity
        subword_handling: "mean-of-piece-vectors",
        similarity: "cosine, mean over mask positions",
        labels: model.labels,
        params: model.params.map((p) => Array.from(p)),
      },
      null,
      2,
    ) + "\n",
  );
}

/** Hidden states and in-process predictions for an evaluation set. */
export function exportRun(
  model: PromptModel,
  records: PromptRecord[],
  meta: PromptMeta,
  outDir: string,
): { predictions: { exampleId: string; label: string }[] } {
  const vectors: { exampleId: string; vectors: Vec[] }[] = [];
  const predictions: { exampleId: string; label: string }[] = [];
  for (const rec of records) {
    const h = model.hidden(model.context(rec, meta));
    vectors.push({ exampleId: rec.example_id, vectors: h });
    predictions.push({ exampleId: rec.example_id, label: model.predict(h) });
  }
  writeMaskVectors(path.join(outDir, "mask_vectors.jsonl"), vectors);
  writeLabelEmbeddings(path.join(outDir, "label_embeddings.jsonl"), model);
  writePredictions(path.join(outDir, "predictions.jsonl"), predictions);
  return { predictions };
}
