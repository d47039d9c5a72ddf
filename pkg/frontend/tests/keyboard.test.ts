// @vitest-environment happy-dom
import { describe, expect, it } from "vitest";

import { bindKeyboard, commandForKey, taskKindOf } from "../src/keyboard.js";
import type { Envelope } from "../src/types.js";

const label: Envelope = {
  id: "label:X", kind: "label", key: "X", payload: {}, verdict: "pending", version: 0,
};
const relevance: Envelope = {
  id: "sample:e:precision/t1", kind: "sample", key: "e:precision/t1",
  payload: { task_kind: "relevance" }, verdict: "pending", version: 0,
};
const sentiment: Envelope = {
  id: "sample:e:sentiment/t1", kind: "sample", key: "e:sentiment/t1",
  payload: { task_kind: "sentiment" }, verdict: "pending", version: 0,
};

describe("commandForKey", () => {
  it("maps accept/reject for labels", () => {
    expect(commandForKey("a", label)).toEqual({ type: "verdict", verdict: "accept" });
    expect(commandForKey("r", label)).toEqual({ type: "verdict", verdict: "reject" });
    expect(commandForKey("ArrowRight", label)).toEqual({ type: "verdict", verdict: "accept" });
  });

  it("maps relevant/irrelevant for relevance samples", () => {
    expect(commandForKey("a", relevance)).toEqual({ type: "verdict", verdict: "relevant" });
    expect(commandForKey("r", relevance)).toEqual({ type: "verdict", verdict: "irrelevant" });
  });

  it("maps the three-way labels for sentiment samples", () => {
    expect(commandForKey("1", sentiment)).toEqual({ type: "verdict", verdict: "Negative" });
    expect(commandForKey("2", sentiment)).toEqual({ type: "verdict", verdict: "Neutral" });
    expect(commandForKey("3", sentiment)).toEqual({ type: "verdict", verdict: "Positive" });
    // the binary keys do nothing here: the class must be explicit
    expect(commandForKey("a", sentiment)).toBeNull();
  });

  it("rejects classes outside the three-way space", () => {
    expect(commandForKey("4", sentiment)).toBeNull();
    expect(commandForKey("v", sentiment)).toBeNull();
  });

  it("navigates regardless of item", () => {
    expect(commandForKey("j", null)).toEqual({ type: "nav", direction: 1 });
    expect(commandForKey("ArrowUp", null)).toEqual({ type: "nav", direction: -1 });
  });

  it("classifies task kinds", () => {
    expect(taskKindOf(label)).toBe("binary");
    expect(taskKindOf(relevance)).toBe("relevance");
    expect(taskKindOf(sentiment)).toBe("sentiment");
  });
});

describe("bindKeyboard", () => {
  it("dispatches commands and ignores form fields", () => {
    const seen: string[] = [];
    bindKeyboard(
      window,
      (command) => seen.push(command.type === "nav" ? "nav" : command.verdict),
      () => label,
    );
    window.dispatchEvent(new KeyboardEvent("keydown", { key: "a", bubbles: true }));
    expect(seen).toEqual(["accept"]);

    const input = document.createElement("input");
    document.body.append(input);
    input.focus();
    input.dispatchEvent(new KeyboardEvent("keydown", { key: "a", bubbles: true }));
    expect(seen).toEqual(["accept"]); // keystroke in the input is not captured
  });
});
