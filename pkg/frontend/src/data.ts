// Loaders for the pipeline's exchange files: prompt records, the emitter's
// sidecar metadata (verbalizers + template), and few-shot id lists.

import * as fs from "fs";
import { z } from "zod";

export const PromptRecordSchema = z.object({
  example_id: z.string(),
  baseline: z.string(),
  prompt: z.string(),
  gold_label: z.string(),
  gold_filled: z.string(),
});
export type PromptRecord = z.infer<typeof PromptRecordSchema>;

export const PromptMetaSchema = z.object({
  template: z.object({
    mask_literal: z.string().min(1),
    mask_count: z.number().int().positive(),
  }),
  // insertion order of labels here is the label-set order used for tie-breaks
  verbalizers: z.record(z.array(z.string())),
  verbalizer_meta: z.object({
    method: z.string(),
    seed: z.number(),
    mask_count: z.number(),
  }),
});
export type PromptMeta = z.infer<typeof PromptMetaSchema>;

export const FewShotSplitSchema = z.object({
  seed: z.number().int(),
  train_ids: z.array(z.string()),
  val_ids: z.array(z.string()),
});
export type FewShotSplit = z.infer<typeof FewShotSplitSchema>;

export class TokenizationMismatch extends Error {}

export function loadJsonl<T>(path: string, schema: z.ZodType<T>): T[] {
  const out: T[] = [];
  for (const line of fs.readFileSync(path, "utf-8").split("\n")) {
    if (line.trim().length === 0) continue;
    out.push(schema.parse(JSON.parse(line)));
  }
  return out;
}

export function loadPromptRecords(path: string): PromptRecord[] {
  return loadJsonl(path, PromptRecordSchema);
}

export function loadPromptMeta(path: string): PromptMeta {
  return PromptMetaSchema.parse(JSON.parse(fs.readFileSync(path, "utf-8")));
}

export function loadFewShotSplit(path: string): FewShotSplit {
  return FewShotSplitSchema.parse(JSON.parse(fs.readFileSync(path, "utf-8")));
}

/** Whitespace tokens of the prompt; verifies the expected mask count. */
export function tokenize(record: PromptRecord, meta: PromptMeta): string[] {
  const tokens = record.prompt.split(/\s+/).filter((t) => t.length > 0);
  const masks = tokens.filter((t) => t === meta.template.mask_literal).length;
  if (masks !== meta.template.mask_count) {
    throw new TokenizationMismatch(
      `${record.example_id}: expected ${meta.template.mask_count} ` +
        `${meta.template.mask_literal} tokens, found ${masks}`,
    );
  }
  return tokens;
}

export function labelOrder(meta: PromptMeta): string[] {
  return Object.keys(meta.verbalizers);
}
