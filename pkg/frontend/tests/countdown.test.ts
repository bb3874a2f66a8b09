import { describe, expect, it } from "vitest";
import { LocalCountdown, formatTicks } from "../src/countdown.js";

describe("local countdown", () => {
  it("decrements between server syncs and clamps at zero", () => {
    const countdown = new LocalCountdown(1000);
    countdown.sync(5, 10_000);
    expect(countdown.current(10_000)).toBe(5);
    expect(countdown.current(12_500)).toBe(3);
    expect(countdown.current(15_000)).toBe(0);
    expect(countdown.current(60_000)).toBe(0);
    expect(countdown.expired(14_999)).toBe(false);
    expect(countdown.expired(15_000)).toBe(true);
  });

  it("re-anchors on sync", () => {
    const countdown = new LocalCountdown(1000);
    countdown.sync(2, 0);
    expect(countdown.current(1_900)).toBe(1);
    countdown.sync(8, 2_000); // server granted a fresh window
    expect(countdown.current(2_000)).toBe(8);
    expect(countdown.current(4_000)).toBe(6);
  });

  it("formats tick counts", () => {
    expect(formatTicks(1)).toBe("1 tick");
    expect(formatTicks(12)).toBe("12 ticks");
  });
});
