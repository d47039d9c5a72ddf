import type { Envelope } from "./types.js";

export type QueueCommand =
  | { type: "verdict"; verdict: string }
  | { type: "nav"; direction: 1 | -1 };

/** The task kind decides which verdicts keys map to. */
export function taskKindOf(item: Envelope): "binary" | "relevance" | "sentiment" {
  if (item.kind !== "sample") return "binary";
  return item.payload["task_kind"] === "relevance" ? "relevance" : "sentiment";
}

/**
 * Keyboard layout:
 *   a / ArrowRight   accept (binary) | relevant  (relevance samples)
 *   r / ArrowLeft    reject (binary) | irrelevant (relevance samples)
 *   1 / 2 / 3        Negative / Neutral / Positive (sentiment samples)
 *   j / ArrowDown    next item
 *   k / ArrowUp      previous item
 */
export function commandForKey(key: string, item: Envelope | null): QueueCommand | null {
  if (key === "j" || key === "ArrowDown") return { type: "nav", direction: 1 };
  if (key === "k" || key === "ArrowUp") return { type: "nav", direction: -1 };
  if (item === null) return null;
  const mode = taskKindOf(item);
  if (mode === "sentiment") {
    const labels: Record<string, string> = { "1": "Negative", "2": "Neutral", "3": "Positive" };
    return key in labels ? { type: "verdict", verdict: labels[key] } : null;
  }
  const positive = mode === "relevance" ? "relevant" : "accept";
  const negative = mode === "relevance" ? "irrelevant" : "reject";
  if (key === "a" || key === "ArrowRight") return { type: "verdict", verdict: positive };
  if (key === "r" || key === "ArrowLeft") return { type: "verdict", verdict: negative };
  return null;
}

/** Attach a keydown handler that ignores keystrokes aimed at form fields. */
export function bindKeyboard(
  target: { addEventListener(type: "keydown", handler: (e: KeyboardEvent) => void): void },
  handle: (command: QueueCommand) => void,
  currentItem: () => Envelope | null,
): (e: KeyboardEvent) => void {
  const handler = (event: KeyboardEvent) => {
    const tag = (event.target as HTMLElement | null)?.tagName;
    if (tag === "INPUT" || tag === "TEXTAREA" || tag === "SELECT") return;
    const command = commandForKey(event.key, currentItem());
    if (command) {
      event.preventDefault();
      handle(command);
    }
  };
  target.addEventListener("keydown", handler);
  return handler;
}
