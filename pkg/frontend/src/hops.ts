import type { PanelHandle } from "./render.js";

export const DEFAULT_FRAME_INTERVAL_MS = 400;

/** Cycles predicted panels through draw frames; observed panels stay put. */
export class HopsPlayer {
  frame = 0;
  playing = false;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(private panels: PanelHandle[], readonly nDraws: number,
              readonly intervalMs: number = DEFAULT_FRAME_INTERVAL_MS) {}

  /** A single draw has nothing to animate; the panel is a static frame. */
  get animatable(): boolean {
    return this.nDraws > 1 && this.panels.some((p) => p.animated);
  }

  get cyclePeriodMs(): number {
    return this.nDraws * this.intervalMs;
  }

  play(): void {
    if (this.playing || !this.animatable) return;
    this.playing = true;
    this.timer = setInterval(() => this.tick(), this.intervalMs);
  }

  pause(): void {
    this.playing = false;
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  toggle(): void {
    if (this.playing) this.pause();
    else this.play();
  }

  tick(): void {
    this.setFrame((this.frame + 1) % Math.max(this.nDraws, 1));
  }

  setFrame(frame: number): void {
    this.frame = frame;
    for (const p of this.panels) {
      if (p.animated) p.setFrame(frame);
    }
  }

  dispose(): void {
    this.pause();
  }
}
