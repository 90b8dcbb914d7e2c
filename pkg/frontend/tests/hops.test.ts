import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { DEFAULT_FRAME_INTERVAL_MS, HopsPlayer } from "../src/hops.js";
import type { PanelHandle } from "../src/render.js";

function fakePanel(source: string, animated: boolean,
                   nDraws: number): PanelHandle & { frames: number[] } {
  const frames: number[] = [];
  return {
    source,
    element: document.createElement("div"),
    svg: document.createElementNS("http://www.w3.org/2000/svg", "svg"),
    animated,
    nDraws,
    frames,
    setFrame(frame: number) {
      frames.push(frame);
    },
  };
}

beforeEach(() => {
  vi.useFakeTimers();
});

afterEach(() => {
  vi.useRealTimers();
});

describe("HopsPlayer", () => {
  it("cycles frames modulo the draw count at the default interval", () => {
    const observed = fakePanel("observed", false, 0);
    const predicted = fakePanel("m1", true, 3);
    const player = new HopsPlayer([observed, predicted], 3);
    player.play();
    expect(player.playing).toBe(true);
    vi.advanceTimersByTime(DEFAULT_FRAME_INTERVAL_MS * 5);
    expect(predicted.frames).toEqual([1, 2, 0, 1, 2]);
    expect(observed.frames).toEqual([]);  // observed panel never animates
    player.dispose();
  });

  it("has a cycle period of draws times the frame interval", () => {
    const player = new HopsPlayer([fakePanel("m1", true, 50)], 50);
    expect(player.cyclePeriodMs).toBe(20_000);  // 50 frames at 400 ms
  });

  it("pause freezes the frame index and play resumes", () => {
    const predicted = fakePanel("m1", true, 4);
    const player = new HopsPlayer([predicted], 4);
    player.play();
    vi.advanceTimersByTime(DEFAULT_FRAME_INTERVAL_MS * 2);
    expect(player.frame).toBe(2);
    player.pause();
    vi.advanceTimersByTime(DEFAULT_FRAME_INTERVAL_MS * 10);
    expect(player.frame).toBe(2);
    expect(player.playing).toBe(false);
    player.play();
    vi.advanceTimersByTime(DEFAULT_FRAME_INTERVAL_MS);
    expect(player.frame).toBe(3);
    player.dispose();
  });

  it("a single draw is a static panel", () => {
    const predicted = fakePanel("m1", true, 1);
    const player = new HopsPlayer([predicted], 1);
    player.play();
    expect(player.playing).toBe(false);
    vi.advanceTimersByTime(DEFAULT_FRAME_INTERVAL_MS * 5);
    expect(predicted.frames).toEqual([]);
    expect(player.frame).toBe(0);
  });

  it("toggle flips between playing and paused", () => {
    const player = new HopsPlayer([fakePanel("m1", true, 2)], 2);
    player.toggle();
    expect(player.playing).toBe(true);
    player.toggle();
    expect(player.playing).toBe(false);
    player.dispose();
  });
});
