import type { Level, ScaleInfo } from "./types.js";

/** Maps a data value to a pixel coordinate inside [r0, r1]. */
export interface Mapper {
  (value: unknown): number;
  /** Half-width of a discrete band in pixels (0 for continuous scales). */
  band: number;
  levels: Level[] | null;
}

export function makeMapper(scale: ScaleInfo, r0: number, r1: number): Mapper {
  if (scale.kind === "continuous") {
    const [d0, d1] = scale.domain;
    const span = d1 - d0 || 1;
    const fn = ((value: unknown) =>
      r0 + ((Number(value) - d0) / span) * (r1 - r0)) as Mapper;
    fn.band = 0;
    fn.levels = null;
    return fn;
  }
  const levels = scale.levels;
  const n = Math.max(levels.length, 1);
  const step = (r1 - r0) / n;
  const index = new Map<string, number>(
    levels.map((lv, i) => [String(lv), i]));
  const fn = ((value: unknown) => {
    const i = index.get(String(value)) ?? 0;
    return r0 + step * (i + 0.5);
  }) as Mapper;
  fn.band = Math.abs(step) / 2;
  fn.levels = levels;
  return fn;
}

/** Deterministic jitter in (-1, 1); stable per (row, draw) so HOPs frames
 * don't shimmer from re-randomized positions. */
export function jitter(row: number, draw: number | null): number {
  let h = (row + 1) * 2654435761 + ((draw ?? -1) + 2) * 40503;
  h = (h ^ (h >>> 13)) >>> 0;
  return ((h % 1000) / 1000) * 2 - 1;
}
